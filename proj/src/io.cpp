#include "ushrink/io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "ushrink/errors.hpp"

namespace ushrink {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  return in;
}

}  // namespace

Dataset parse_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) numeric = numeric && parse_number(fields[k], row[k]);
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw InputError("malformed CSV: non-numeric field on line " + std::to_string(line_no));
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError("malformed CSV: line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                       " fields, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("malformed CSV: no numeric rows");
  Dataset out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < out.rows(); ++i)
    for (Index k = 0; k < out.cols(); ++k) out(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  return out;
}

Dataset read_dataset(const std::string& path) {
  if (path == "-") return parse_csv(std::cin);
  std::ifstream in = open_file(path);
  return parse_csv(in);
}

Matrix read_square_matrix(const std::string& path) {
  Dataset m;
  if (path == "-") {
    m = parse_csv(std::cin);
  } else {
    std::ifstream in = open_file(path);
    m = parse_csv(in);
  }
  if (m.rows() != m.cols()) {
    throw InputError("expected a square matrix in " + path + ", got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
  return Matrix(m);
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json j = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    j.push_back(std::move(row));
  }
  return j;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("matrix JSON must be an array of rows");
  const auto rows = static_cast<Index>(j.size());
  const Index cols = rows > 0 ? static_cast<Index>(j.at(0).size()) : 0;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(row.size()) != cols) throw InputError("matrix JSON rows have different lengths");
    for (Index k = 0; k < cols; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  return m;
}

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json j = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Vector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("vector JSON must be an array");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

void to_json(nlohmann::json& j, const ShrinkageReport& r) {
  j = nlohmann::json{{"delta_hat", r.delta_hat},
                     {"dist_sq", r.dist_sq},
                     {"alpha_raw", r.alpha_raw},
                     {"alpha", r.alpha},
                     {"variant", to_string(r.variant)}};
}

void from_json(const nlohmann::json& j, ShrinkageReport& r) {
  r.delta_hat = j.at("delta_hat").get<double>();
  r.dist_sq = j.at("dist_sq").get<double>();
  r.alpha_raw = j.at("alpha_raw").get<double>();
  r.alpha = j.at("alpha").get<double>();
  const auto v = j.at("variant").get<std::string>();
  if (v == "general") {
    r.variant = Variant::General;
  } else if (v == "degenerate") {
    r.variant = Variant::Degenerate;
  } else {
    throw InputError("unknown shrinkage variant: " + v);
  }
}

void to_json(nlohmann::json& j, const NormalMeanResult& r) {
  j = nlohmann::json{{"xbar", vector_to_json(r.xbar)},
                     {"s2", r.s2},
                     {"alpha", r.alpha},
                     {"c", r.c},
                     {"estimate", vector_to_json(r.estimate)}};
}

void from_json(const nlohmann::json& j, NormalMeanResult& r) {
  r.xbar = vector_from_json(j.at("xbar"));
  r.s2 = j.at("s2").get<double>();
  r.alpha = j.at("alpha").get<double>();
  r.c = j.at("c").get<double>();
  r.estimate = vector_from_json(j.at("estimate"));
}

void to_json(nlohmann::json& j, const CovShrinkResult& r) {
  j = nlohmann::json{{"sigma_hat", matrix_to_json(r.sigma_hat)},
                     {"c_hat", matrix_to_json(r.c_hat)},
                     {"shrunk", matrix_to_json(r.shrunk)},
                     {"tau", r.tau},
                     {"report", r.report}};
}

void from_json(const nlohmann::json& j, CovShrinkResult& r) {
  r.sigma_hat = matrix_from_json(j.at("sigma_hat"));
  r.c_hat = matrix_from_json(j.at("c_hat"));
  r.shrunk = matrix_from_json(j.at("shrunk"));
  r.tau = j.at("tau").get<double>();
  r.report = j.at("report").get<ShrinkageReport>();
}

void to_json(nlohmann::json& j, const DualMeanElement& e) {
  j = nlohmann::json{{"data_weights", vector_to_json(e.data_weights)},
                     {"target_weights", vector_to_json(e.target_weights)}};
  if (e.landmarks) j["landmarks"] = matrix_to_json(*e.landmarks);
}

void to_json(nlohmann::json& j, const RiskEstimate& r) {
  j = nlohmann::json{{"mean_sq_error", r.mean_sq_error}, {"std_error", r.std_error}, {"reps", r.reps}, {"seed", r.seed}};
}

void from_json(const nlohmann::json& j, RiskEstimate& r) {
  r.mean_sq_error = j.at("mean_sq_error").get<double>();
  r.std_error = j.at("std_error").get<double>();
  r.reps = j.at("reps").get<std::int64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
}

void to_json(nlohmann::json& j, const McSummary& s) {
  j = nlohmann::json{{"mean", s.mean}, {"std_error", s.std_error}, {"reps", s.reps}, {"seed", s.seed}};
}

}  // namespace ushrink
