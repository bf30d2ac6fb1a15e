#include "ushrink/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ushrink/covmat.hpp"
#include "ushrink/io.hpp"
#include "ushrink/normalmean.hpp"
#include "ushrink/selfcheck.hpp"
#include "ushrink/simulate.hpp"

namespace ushrink::cli {

namespace {

using nlohmann::json;

struct Experiment {
  std::string name;
  std::vector<std::int64_t> default_grid;
  std::int64_t default_reps;
};

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> list = {
      {"unbiasedness", {10}, 100'000},
      {"theorem5", {5}, 100'000},
      {"theorem6", {10}, 1'000'000},
      {"consistency", {25, 50, 100, 200}, 10'000},
      {"oracle", {10}, 100'000},
  };
  return list;
}

const Experiment& find_experiment(const std::string& name) {
  for (const Experiment& e : experiments()) {
    if (e.name == name) return e;
  }
  throw UsageError("--experiment: unknown experiment '" + name + "'");
}

EnumerationOptions enumeration_options() {
  EnumerationOptions opts;
  const char* raw = std::getenv(kEnumLimitEnv);
  if (raw == nullptr) return opts;
  const std::string text(raw);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
    throw UsageError(std::string(kEnumLimitEnv) + ": expected a positive integer, got '" + text + "'");
  }
  opts.limit = value;
  return opts;
}

KernelSpec kernel_from(const RunConfig& cfg) {
  if (cfg.kernel == "linear") return LinearKernel{};
  if (cfg.kernel == "gaussian") return GaussianKernel{cfg.bandwidth};
  if (cfg.kernel == "exponential") return ExponentialKernel{cfg.scale};
  throw UsageError("--kernel: unsupported kernel '" + cfg.kernel + "'");
}

Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Index>(i)) = v[i];
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands.

json run_mean_shrink(const RunConfig& cfg) {
  if (cfg.kernel == "precomputed") {
    Matrix m = read_square_matrix(*cfg.input_path);
    validate(KernelSpec{PrecomputedKernel{m}});
    const GramMatrix g(std::move(m));
    const MeanShrinkResult res = shrink_mean(g, ZeroTarget{});
    return json{{"n", g.size()}, {"report", res.report}, {"element", res.element}};
  }

  const Dataset data = read_dataset(*cfg.input_path);
  const KernelSpec kernel = kernel_from(cfg);
  validate(kernel);

  TargetSpec target = ZeroTarget{};
  if (cfg.target == "dual") {
    DualTarget dual{read_dataset(*cfg.landmarks_path), to_vector(cfg.coefficients)};
    if (dual.landmarks.rows() != dual.coefficients.size()) {
      throw InputError("--coefficients: expected " + std::to_string(dual.landmarks.rows()) +
                       " values (one per landmark), got " + std::to_string(dual.coefficients.size()));
    }
    target = std::move(dual);
  }

  MeanShrinkResult res = shrink_mean(kernel, data, target);
  if (const auto* dual = std::get_if<DualTarget>(&target)) res.element.landmarks = dual->landmarks;

  json out{{"n", data.rows()}, {"d", data.cols()}, {"report", res.report}, {"element", res.element}};
  if (res.report.alpha < 1.0) out["regularization_parameter"] = regularization_parameter(res.report.alpha);

  if (!cfg.eval_points.empty()) {
    json evals = json::array();
    for (const std::vector<double>& p : cfg.eval_points) {
      if (static_cast<Index>(p.size()) != data.cols()) {
        throw InputError("--eval-point: expected " + std::to_string(data.cols()) + " coordinates, got " +
                         std::to_string(p.size()));
      }
      const Point x = to_vector(p).transpose();
      evals.push_back(json{{"point", p}, {"value", evaluate_mean(res.element, kernel, data, x)}});
    }
    out["evaluations"] = std::move(evals);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simulation experiments.

struct Row {
  std::string config_hash;
  std::string estimator;
  std::int64_t n = 0;
  std::int64_t d = 0;
  std::int64_t reps = 0;
  double mse = 0.0;
  double std_error = 0.0;
};

struct SimOutput {
  std::vector<Row> rows;
  json details = json::array();
};

class SimContext {
 public:
  SimContext(std::string experiment, std::uint64_t seed, std::int64_t reps, McOptions opts)
      : experiment_(std::move(experiment)), seed_(seed), reps_(reps), opts_(opts) {}

  std::int64_t reps() const { return reps_; }
  std::uint64_t seed() const { return seed_; }
  const McOptions& opts() const { return opts_; }

  void add(SimOutput& out, const std::string& estimator, std::int64_t n, std::int64_t d, double value,
           double se) const {
    std::ostringstream key;
    key << "experiment=" << experiment_ << ";estimator=" << estimator << ";n=" << n << ";d=" << d
        << ";reps=" << reps_ << ";seed=" << seed_;
    out.rows.push_back(Row{config_hash(key.str()), estimator, n, d, reps_, value, se});
  }

  void add_risk(SimOutput& out, const std::string& estimator, std::int64_t n, std::int64_t d,
                const RiskEstimate& r) const {
    add(out, estimator, n, d, r.mean_sq_error, r.std_error);
  }

 private:
  std::string experiment_;
  std::uint64_t seed_;
  std::int64_t reps_;
  McOptions opts_;
};

Vector basis(Index d, double scale) {
  Vector mu = Vector::Zero(d);
  mu(0) = scale;
  return mu;
}

json paired_json(const std::string& label, std::int64_t n, const McSummary& diff) {
  const double z = diff.std_error > 0.0 ? diff.mean / diff.std_error : 0.0;
  return json{{"comparison", label}, {"n", n}, {"mean_difference", diff.mean}, {"std_error", diff.std_error},
              {"z", z}};
}

SimOutput exp_unbiasedness(const SimContext& ctx, const std::vector<std::int64_t>& grid) {
  SimOutput out;
  const Index d = 3;
  const DistSpec dist = SphericalGaussian{basis(d, 1.0), 1.0};
  const Statistic stat = [](const Dataset& x) {
    return shrink_mean(LinearKernel{}, x, ZeroTarget{}).report.delta_hat;
  };
  for (std::int64_t n : grid) {
    const McSummary s = mc_mean(stat, dist, n, ctx.reps(), ctx.seed(), ctx.opts());
    const double truth = static_cast<double>(d) / static_cast<double>(n);
    ctx.add(out, "delta_hat_general", n, d, s.mean, s.std_error);
    out.details.push_back(json{{"n", n}, {"mean_delta_hat", s.mean}, {"std_error", s.std_error},
                               {"analytic_delta", truth},
                               {"z", s.std_error > 0.0 ? (s.mean - truth) / s.std_error : 0.0}});
  }
  return out;
}

SimOutput exp_paired(const SimContext& ctx, const std::vector<std::int64_t>& grid, Index d, double shift,
                     bool use_default_c) {
  SimOutput out;
  const DistSpec dist = SphericalGaussian{basis(d, shift), 1.0};
  for (std::int64_t n : grid) {
    if (n < 2) throw InsufficientSampleError("simulate: normal-mean experiments need n >= 2");
    const EstimatorSpec shrunk = use_default_c ? EstimatorSpec{MuCheckC{default_c(n)}} : EstimatorSpec{MuCheck{}};
    const PairedRisk p = mc_compare(shrunk, SampleMean{}, dist, n, ctx.reps(), ctx.seed(), ctx.opts());
    const std::string a = describe(shrunk);
    const std::string b = describe(SampleMean{});
    ctx.add_risk(out, b, n, d, p.b);
    ctx.add_risk(out, a, n, d, p.a);
    ctx.add(out, "paired_diff:" + a + "-" + b, n, d, p.difference.mean, p.difference.std_error);
    json detail = paired_json(a + "-" + b, n, p.difference);
    detail["analytic_sample_mean_risk"] = static_cast<double>(d) / static_cast<double>(n);
    if (use_default_c) detail["c"] = default_c(n);
    out.details.push_back(std::move(detail));
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

SimOutput exp_consistency(const SimContext& ctx, const std::vector<std::int64_t>& grid) {
  SimOutput out;
  const Index d = 2;
  const DistSpec dist = SphericalGaussian{basis(d, 1.0), 1.0};
  const MeanEmbedShrink est{GaussianKernel{1.0}, ZeroTarget{}};
  std::vector<std::pair<double, double>> points;
  for (std::int64_t n : grid) {
    const RiskEstimate r = mc_risk(est, dist, n, ctx.reps(), ctx.seed(), ctx.opts());
    ctx.add_risk(out, describe(est), n, d, r);
    points.emplace_back(static_cast<double>(n), r.mean_sq_error);

    const double oracle = oracle_alpha(dist, est, n);
    const Statistic gap = [&](const Dataset& x) {
      return std::abs(shrink_mean(est.kernel, x, est.target).report.alpha_raw - oracle);
    };
    const std::vector<double> gaps = mc_values(gap, dist, n, ctx.reps(), ctx.seed(), ctx.opts());
    const McSummary g = summarize(gaps, ctx.seed());
    ctx.add(out, "alpha_abs_gap", n, d, g.mean, g.std_error);
    out.details.push_back(
        json{{"n", n}, {"oracle_alpha", oracle}, {"median_alpha_abs_gap", median(gaps)}, {"mean_alpha_abs_gap", g.mean}});
  }
  if (points.size() >= 2) out.details.push_back(json{{"rate_slope", rate_slope(points)}});
  return out;
}

SimOutput exp_oracle(const SimContext& ctx, const std::vector<std::int64_t>& grid) {
  SimOutput out;
  const Index d = 3;
  const DistSpec dist = SphericalGaussian{basis(d, 1.0), 1.0};
  const MeanEmbedShrink plug_in{LinearKernel{}, ZeroTarget{}};
  for (std::int64_t n : grid) {
    const double oracle = oracle_alpha(dist, plug_in, n);
    const EstimatorSpec fixed = FixedShrinkMean{oracle};
    const PairedRisk vs_mean = mc_compare(fixed, SampleMean{}, dist, n, ctx.reps(), ctx.seed(), ctx.opts());
    const PairedRisk vs_oracle = mc_compare(plug_in, fixed, dist, n, ctx.reps(), ctx.seed(), ctx.opts());
    const std::string f = describe(fixed);
    const std::string m = describe(SampleMean{});
    const std::string p = describe(plug_in);
    ctx.add_risk(out, m, n, d, vs_mean.b);
    ctx.add_risk(out, f, n, d, vs_mean.a);
    ctx.add_risk(out, p, n, d, vs_oracle.a);
    ctx.add(out, "paired_diff:" + f + "-" + m, n, d, vs_mean.difference.mean, vs_mean.difference.std_error);
    ctx.add(out, "paired_diff:" + p + "-" + f, n, d, vs_oracle.difference.mean, vs_oracle.difference.std_error);
    json a = paired_json(f + "-" + m, n, vs_mean.difference);
    a["oracle_alpha"] = oracle;
    out.details.push_back(std::move(a));
    out.details.push_back(paired_json(p + "-" + f, n, vs_oracle.difference));
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void run_simulate(const RunConfig& cfg, std::ostream& out) {
  const Experiment& e = find_experiment(cfg.experiment);
  const std::vector<std::int64_t> grid = cfg.n_grid.empty() ? e.default_grid : cfg.n_grid;
  const std::int64_t reps = cfg.reps.value_or(e.default_reps);
  const SimContext ctx(e.name, cfg.seed, reps, McOptions{cfg.threads});

  SimOutput res;
  if (e.name == "unbiasedness") {
    res = exp_unbiasedness(ctx, grid);
  } else if (e.name == "theorem5") {
    res = exp_paired(ctx, grid, 10, 1.0, false);
  } else if (e.name == "theorem6") {
    res = exp_paired(ctx, grid, 3, 2.0, true);
  } else if (e.name == "consistency") {
    res = exp_consistency(ctx, grid);
  } else {
    res = exp_oracle(ctx, grid);
  }

  if (cfg.output == OutputFormat::Csv) {
    out << "config_hash,estimator,n,d,reps,mse,stderr\n";
    for (const Row& r : res.rows) {
      out << r.config_hash << ',' << csv_escape(r.estimator) << ',' << r.n << ',' << r.d << ',' << r.reps << ','
          << format_double(r.mse) << ',' << format_double(r.std_error) << '\n';
    }
    return;
  }
  json rows = json::array();
  for (const Row& r : res.rows) {
    rows.push_back(json{{"config_hash", r.config_hash}, {"estimator", r.estimator}, {"n", r.n}, {"d", r.d},
                        {"reps", r.reps}, {"mse", r.mse}, {"stderr", r.std_error}});
  }
  out << json{{"experiment", e.name}, {"seed", cfg.seed}, {"reps", reps}, {"rows", rows}, {"details", res.details}}
             .dump(2)
      << '\n';
}

int run_check(const RunConfig& cfg, std::ostream& out) {
  const std::vector<selfcheck::SuiteResult> suites = selfcheck::run_all(cfg.seed, enumeration_options());
  int passed = 0;
  int failed = 0;
  bool all_ok = true;
  for (const auto& s : suites) {
    passed += s.passed;
    failed += s.failed;
    all_ok = all_ok && s.ok();
  }
  if (cfg.output == OutputFormat::Csv) {
    out << "suite,passed,failed,max_rel_error,tolerance,status\n";
    for (const auto& s : suites) {
      out << s.name << ',' << s.passed << ',' << s.failed << ',' << format_double(s.max_rel_error) << ','
          << format_double(s.tolerance) << ',' << (s.ok() ? "pass" : "fail") << '\n';
    }
  } else {
    json list = json::array();
    for (const auto& s : suites) {
      list.push_back(json{{"name", s.name}, {"passed", s.passed}, {"failed", s.failed},
                          {"max_rel_error", s.max_rel_error}, {"tolerance", s.tolerance},
                          {"status", s.ok() ? "pass" : "fail"}});
    }
    out << json{{"seed", cfg.seed}, {"suites", list}, {"passed", passed}, {"failed", failed},
                {"status", all_ok ? "pass" : "fail"}}
               .dump(2)
        << '\n';
  }
  return all_ok ? 0 : 2;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::MeanShrink:
      out << run_mean_shrink(cfg).dump(2) << '\n';
      return 0;
    case Command::CovShrink: {
      const Dataset data = read_dataset(*cfg.input_path);
      const CovShrinkResult res = shrink_cov_matrix(data, cfg.tau, cfg.variant);
      if (cfg.output == OutputFormat::Csv) {
        write_csv(out, res.shrunk);
      } else {
        out << json(res).dump(2) << '\n';
      }
      return 0;
    }
    case Command::NormalMean: {
      const Dataset data = read_dataset(*cfg.input_path);
      // n < 2 is reported by mu_check_c itself.
      const double c = cfg.c ? *cfg.c : (data.rows() >= 2 ? default_c(data.rows()) : 1.0);
      out << json(mu_check_c(data, c)).dump(2) << '\n';
      return 0;
    }
    case Command::Simulate:
      run_simulate(cfg, out);
      return 0;
    case Command::Check:
      return run_check(cfg, out);
  }
  return 0;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const Experiment& e : experiments()) v.push_back(e.name);
    return v;
  }();
  return names;
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Shrinkage estimators for U-statistic estimands", "ushrink"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  RunConfig cfg;
  std::string input;
  std::string landmarks;
  std::string variant = "general";
  std::string output = "json";
  std::string out_path;
  std::vector<std::string> eval_points;
  double c = 0.0;
  std::int64_t reps = 0;

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output", output, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "Write output to this file instead of stdout");
  };

  CLI::App* mean = app.add_subcommand("mean-shrink", "Shrink the empirical kernel mean embedding");
  mean->add_option("--input", input, "CSV dataset (or Gram matrix for --kernel precomputed); '-' for stdin")->required();
  mean->add_option("--kernel", cfg.kernel, "Kernel")
      ->check(CLI::IsMember({"linear", "gaussian", "exponential", "precomputed"}));
  CLI::Option* bw = mean->add_option("--bandwidth", cfg.bandwidth, "Gaussian bandwidth h in exp(-|x-y|^2/h)");
  CLI::Option* sc = mean->add_option("--scale", cfg.scale, "Exponential scale s in exp(<x,y>/s)");
  mean->add_option("--target", cfg.target, "Shrinkage target")->check(CLI::IsMember({"zero", "dual"}));
  CLI::Option* lm = mean->add_option("--landmarks", landmarks, "CSV of target landmark points");
  CLI::Option* co = mean->add_option("--coefficients", cfg.coefficients, "Comma-separated target coefficients")
                        ->delimiter(',');
  CLI::Option* ev = mean->add_option("--eval-point", eval_points, "Comma-separated point to evaluate at (repeatable)");
  add_output(mean);

  CLI::App* cov = app.add_subcommand("cov-shrink", "Shrink the sample covariance matrix toward tau * I");
  cov->add_option("--input", input, "CSV dataset; '-' for stdin")->required();
  cov->add_option("--tau", cfg.tau, "Target scale");
  cov->add_option("--variant", variant, "Risk estimator")->check(CLI::IsMember({"general", "degen"}));
  add_output(cov);

  CLI::App* nm = app.add_subcommand("normal-mean", "Shrink the sample mean toward zero");
  nm->add_option("--input", input, "CSV dataset; '-' for stdin")->required();
  CLI::Option* c_opt = nm->add_option("--c", c, "Shrinkage multiplier in (0, 2); default (2n-2)/(3n-1)");
  add_output(nm);

  CLI::App* sim = app.add_subcommand("simulate", "Run a canned Monte-Carlo experiment");
  std::string experiment_list;
  for (const std::string& n : experiment_names()) experiment_list += (experiment_list.empty() ? "" : "|") + n;
  sim->add_option("--experiment", cfg.experiment, experiment_list)->required();
  CLI::Option* reps_opt = sim->add_option("--reps", reps, "Monte-Carlo replications (>= 100)");
  sim->add_option("--seed", cfg.seed, "Base seed");
  sim->add_option("--n-grid", cfg.n_grid, "Comma-separated sample sizes")->delimiter(',');
  sim->add_option("--threads", cfg.threads, "Worker threads (0 = hardware concurrency)");
  add_output(sim);

  CLI::App* chk = app.add_subcommand("check", "Run the built-in oracle-equivalence suites");
  chk->add_option("--seed", cfg.seed, "Base seed");
  add_output(chk);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (mean->parsed()) {
    cfg.command = Command::MeanShrink;
    if (cfg.kernel == "precomputed") {
      if (ev->count() > 0) throw UsageError("--eval-point: conflicts with --kernel precomputed");
      if (cfg.target != "zero") throw UsageError("--target: only 'zero' is available with --kernel precomputed");
    }
    if (bw->count() > 0 && cfg.kernel != "gaussian") throw UsageError("--bandwidth: requires --kernel gaussian");
    if (sc->count() > 0 && cfg.kernel != "exponential") throw UsageError("--scale: requires --kernel exponential");
    if (cfg.kernel == "gaussian" && !(cfg.bandwidth > 0.0 && std::isfinite(cfg.bandwidth))) {
      throw UsageError("--bandwidth: must be positive and finite");
    }
    if (cfg.kernel == "exponential" && !(cfg.scale > 0.0 && std::isfinite(cfg.scale))) {
      throw UsageError("--scale: must be positive and finite");
    }
    if (cfg.target == "dual") {
      if (lm->count() == 0) throw UsageError("--landmarks: required with --target dual");
      if (co->count() == 0) throw UsageError("--coefficients: required with --target dual");
      cfg.landmarks_path = landmarks;
    } else if (lm->count() > 0 || co->count() > 0) {
      throw UsageError("--landmarks/--coefficients: only valid with --target dual");
    }
    for (const std::string& p : eval_points) {
      std::vector<double> coords;
      std::stringstream ss(p);
      std::string field;
      while (std::getline(ss, field, ',')) {
        double v = 0.0;
        const char* b = field.data();
        const char* e = b + field.size();
        const auto [ptr, ec] = std::from_chars(b, e, v);
        if (field.empty() || ec != std::errc{} || ptr != e) {
          throw UsageError("--eval-point: cannot parse '" + p + "' as comma-separated numbers");
        }
        coords.push_back(v);
      }
      if (coords.empty()) throw UsageError("--eval-point: empty point");
      cfg.eval_points.push_back(std::move(coords));
    }
  } else if (cov->parsed()) {
    cfg.command = Command::CovShrink;
    if (!(cfg.tau >= 0.0 && std::isfinite(cfg.tau))) throw UsageError("--tau: must be non-negative and finite");
    cfg.variant = variant == "degen" ? Variant::Degenerate : Variant::General;
  } else if (nm->parsed()) {
    cfg.command = Command::NormalMean;
    if (c_opt->count() > 0) {
      if (!(c > 0.0 && c < 2.0)) throw UsageError("--c: must lie in (0, 2)");
      cfg.c = c;
    }
  } else if (sim->parsed()) {
    cfg.command = Command::Simulate;
    find_experiment(cfg.experiment);
    if (reps_opt->count() > 0) {
      if (reps < kMinReplications) {
        throw UsageError("--reps: must be at least " + std::to_string(kMinReplications) + ", got " +
                         std::to_string(reps));
      }
      cfg.reps = reps;
    }
    for (std::int64_t n : cfg.n_grid) {
      if (n < 2) throw UsageError("--n-grid: sample sizes must be at least 2");
    }
  } else {
    cfg.command = Command::Check;
  }

  if (!input.empty()) cfg.input_path = input;
  if (!out_path.empty()) cfg.out_path = out_path;
  cfg.output = output == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  if (cfg.output == OutputFormat::Csv &&
      (cfg.command == Command::MeanShrink || cfg.command == Command::NormalMean)) {
    throw UsageError("--output: csv is not available for this subcommand");
  }
  return cfg;
}

int run(const RunConfig& config, std::ostream& out) {
  if (!config.out_path) return dispatch(config, out);
  // Render fully before touching the file so a failed run leaves no partial output.
  std::ostringstream buffer;
  const int code = dispatch(config, buffer);
  std::ofstream file(*config.out_path, std::ios::binary);
  if (!file) throw InputError("cannot open output file: " + *config.out_path);
  file << buffer.str();
  if (!file) throw ResourceError("failed writing output file: " + *config.out_path);
  return code;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(parse_args(args), out);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ushrink::cli
