#include "ushrink/normalmean.hpp"

#include <cmath>
#include <string>

#include "ushrink/errors.hpp"
#include "ushrink/shrinkage.hpp"

namespace ushrink {
namespace {

void check_c(double c, const char* what) {
  if (!(c > 0.0 && c < 2.0)) {
    throw ParameterError(std::string(what) + ": c must lie in (0, 2), got " + std::to_string(c));
  }
}

void check_n(std::int64_t n, const char* what) {
  if (n < 2) {
    throw InsufficientSampleError(std::string(what) + ": need n >= 2, got n=" + std::to_string(n));
  }
}

}  // namespace

NormalMeanResult mu_check(const Dataset& data) { return mu_check_c(data, 1.0); }

NormalMeanResult mu_check_c(const Dataset& data, double c) {
  check_n(data.rows(), "mu_check_c");
  check_c(c, "mu_check_c");
  if (data.cols() < 1) throw InputError("mu_check_c: need d >= 1");
  const double n = static_cast<double>(data.rows());

  NormalMeanResult out;
  out.c = c;
  out.xbar = data.colwise().mean().transpose();
  double ss = 0.0;
  for (Index i = 0; i < data.rows(); ++i) ss += (data.row(i).transpose() - out.xbar).squaredNorm();
  out.s2 = ss / (n - 1.0);
  out.alpha = alpha_from(out.s2 / n, out.xbar.squaredNorm()).alpha;
  out.estimate = (1.0 - c * out.alpha) * out.xbar;
  return out;
}

double default_c(std::int64_t n) {
  check_n(n, "default_c");
  const auto nd = static_cast<double>(n);
  return (2.0 * nd - 2.0) / (3.0 * nd - 1.0);
}

double dimension_threshold(std::int64_t n, double c) {
  check_n(n, "dimension_threshold");
  check_c(c, "dimension_threshold");
  const auto nd = static_cast<double>(n);
  return 4.0 / (2.0 - c) + 2.0 * c / ((nd - 1.0) * (2.0 - c));
}

}  // namespace ushrink
