#pragma once

#include <cstdint>

#include "ushrink/types.hpp"

namespace ushrink {

/// Shrinkage of the sample mean toward zero,
///   estimate = (1 - c * alpha) * xbar,  alpha = (S^2/n) / (S^2/n + ||xbar||^2),
/// where S^2 = (1/(n-1)) sum ||X_i - xbar||^2.
struct NormalMeanResult {
  Vector xbar;
  double s2 = 0.0;
  double alpha = 0.0;
  double c = 1.0;
  Vector estimate;
};

/// c = 1. All-zero data resolves to alpha = 0.
NormalMeanResult mu_check(const Dataset& data);

/// Requires 0 < c < 2 and n >= 2.
NormalMeanResult mu_check_c(const Dataset& data, double c);

/// (2n - 2) / (3n - 1): the multiplier for which the shrunk mean dominates the
/// sample mean in every dimension d >= 3 under spherical Gaussian sampling.
double default_c(std::int64_t n);

/// Sufficient dimension for risk improvement, 4/(2-c) + 2c/((n-1)(2-c)).
double dimension_threshold(std::int64_t n, double c);

}  // namespace ushrink
