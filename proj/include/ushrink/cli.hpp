#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ushrink/errors.hpp"
#include "ushrink/shrinkage.hpp"

namespace ushrink::cli {

/// Environment variable overriding the U-statistic enumeration limit.
inline constexpr const char* kEnumLimitEnv = "USHRINK_ENUM_LIMIT";

enum class Command { MeanShrink, CovShrink, NormalMean, Simulate, Check };
enum class OutputFormat { Json, Csv };

struct RunConfig {
  Command command = Command::Check;
  std::optional<std::string> input_path;

  // mean-shrink
  std::string kernel = "linear";
  double bandwidth = 1.0;
  double scale = 1.0;
  std::string target = "zero";
  std::optional<std::string> landmarks_path;
  std::vector<double> coefficients;
  std::vector<std::vector<double>> eval_points;

  // cov-shrink
  double tau = 1.0;
  Variant variant = Variant::General;

  // normal-mean; unset means default_c(n) once n is known.
  std::optional<double> c;

  // simulate / check
  std::string experiment;
  std::uint64_t seed = 1;
  std::optional<std::int64_t> reps;
  std::vector<std::int64_t> n_grid;
  unsigned threads = 0;

  OutputFormat output = OutputFormat::Json;
  std::optional<std::string> out_path;
};

/// Invalid command line. Maps to exit code 1.
class UsageError : public InputError {
 public:
  using InputError::InputError;
};

/// --help was requested; what() holds the help text.
class HelpRequested : public Error {
 public:
  using Error::Error;
};

/// Parses argv without the program name. Throws UsageError or HelpRequested.
RunConfig parse_args(const std::vector<std::string>& args);

/// Executes a validated config, writing the result to `out` (or out_path).
/// Returns 0 on success, 2 when a self-check suite fails. Library errors propagate.
int run(const RunConfig& config, std::ostream& out);

/// Full entry point: parse, run, report errors on `err`. Exit codes:
/// 0 success, 1 validation / input error, 2 numerical or capability error.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Names accepted by `simulate --experiment`.
const std::vector<std::string>& experiment_names();

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string config_hash(const std::string& text);

}  // namespace ushrink::cli
