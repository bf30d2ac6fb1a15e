#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ushrink/kernels.hpp"
#include "ushrink/shrinkage.hpp"

namespace ushrink::selfcheck {

/// Outcome of one oracle-equivalence suite.
struct SuiteResult {
  std::string name;
  int passed = 0;
  int failed = 0;
  double max_rel_error = 0.0;
  double tolerance = 0.0;

  [[nodiscard]] bool ok() const noexcept { return failed == 0 && passed > 0; }
};

/// |a - b| / max(|a|, |b|), zero when both vanish.
double relative_error(double a, double b);

/// Covariance-operator risk estimates by exhaustive enumeration of the
/// kappa functions through the U-statistic engine.
double brute_delta_general_covop(const GramMatrix& gram, const EnumerationOptions& opts = {});
double brute_delta_degen_covop(const GramMatrix& gram, const EnumerationOptions& opts = {});

/// Lemma identities on 50 random datasets, n in [2, 10], d in {1, 2, 3, 5},
/// entries Uniform(-2, 2). Tolerance 1e-9 relative.
SuiteResult lemma_identities(std::uint64_t seed);

/// Closed-form covariance-matrix risk estimates versus enumeration on 20
/// random datasets with n in [4, 8]. Tolerance 1e-8 relative.
SuiteResult closed_form_vs_enumeration(std::uint64_t seed, const EnumerationOptions& opts = {});

/// Generic kappa-family estimators versus the Gram closed forms for the
/// mean element (k = 1) and the covariance operator (k = 2), under the
/// linear, gaussian and exponential kernels, n <= 8. Tolerance 1e-9 relative.
SuiteResult generic_engine_cross_checks(std::uint64_t seed, const EnumerationOptions& opts = {});

/// Covariance-matrix shrinkage with tau = 0 versus covariance-operator
/// shrinkage under the linear kernel on 10 datasets, n in [4, 8].
/// Tolerance 1e-9 relative on delta_hat, dist_sq and alpha.
SuiteResult covmat_vs_covop(std::uint64_t seed);

std::vector<SuiteResult> run_all(std::uint64_t seed, const EnumerationOptions& opts = {});

}  // namespace ushrink::selfcheck
