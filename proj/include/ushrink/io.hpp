#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "ushrink/covmat.hpp"
#include "ushrink/normalmean.hpp"
#include "ushrink/shrinkage.hpp"
#include "ushrink/simulate.hpp"

namespace ushrink {

/// Numeric CSV: rows are observations, columns coordinates. A single header
/// row is skipped when the first row contains a non-numeric field. Blank
/// lines are ignored. Throws InputError on ragged or non-numeric rows.
Dataset parse_csv(std::istream& in);

/// Reads a dataset from a file, or from stdin when `path` is "-".
Dataset read_dataset(const std::string& path);

/// Reads a square matrix (no header) and checks that it is square.
Matrix read_square_matrix(const std::string& path);

/// Row-major CSV, no header, shortest round-trip decimal form.
void write_csv(std::ostream& out, const Matrix& m);

std::string format_double(double v);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const ShrinkageReport& r);
void from_json(const nlohmann::json& j, ShrinkageReport& r);
void to_json(nlohmann::json& j, const NormalMeanResult& r);
void from_json(const nlohmann::json& j, NormalMeanResult& r);
void to_json(nlohmann::json& j, const CovShrinkResult& r);
void from_json(const nlohmann::json& j, CovShrinkResult& r);
void to_json(nlohmann::json& j, const DualMeanElement& e);
void to_json(nlohmann::json& j, const RiskEstimate& r);
void from_json(const nlohmann::json& j, RiskEstimate& r);
void to_json(nlohmann::json& j, const McSummary& s);

}  // namespace ushrink
