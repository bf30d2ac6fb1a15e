#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "ushrink/types.hpp"

namespace testing {

using ushrink::Dataset;
using ushrink::Index;
using ushrink::Matrix;

inline Index pick(std::mt19937_64& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

inline Dataset uniform_data(std::mt19937_64& rng, Index n, Index d, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  Dataset x(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) x(i, j) = u(rng);
  }
  return x;
}

inline Dataset normal_data(std::mt19937_64& rng, Index n, Index d) {
  std::normal_distribution<double> z;
  Dataset x(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) x(i, j) = z(rng);
  }
  return x;
}

/// Haar-ish orthogonal matrix from the QR factorization of a Gaussian matrix.
inline Matrix random_rotation(std::mt19937_64& rng, Index d) {
  std::normal_distribution<double> z;
  Matrix a(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) a(i, j) = z(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(d, d);
}

/// Rows in a random order.
inline Dataset shuffled(std::mt19937_64& rng, const Dataset& x) {
  std::vector<Index> order(static_cast<std::size_t>(x.rows()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
  std::shuffle(order.begin(), order.end(), rng);
  Dataset out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) out.row(i) = x.row(order[static_cast<std::size_t>(i)]);
  return out;
}

inline double rel(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline Dataset rows(std::initializer_list<std::initializer_list<double>> values) {
  const Index n = static_cast<Index>(values.size());
  const Index d = n == 0 ? 0 : static_cast<Index>(values.begin()->size());
  Dataset x(n, d);
  Index i = 0;
  for (const auto& r : values) {
    Index j = 0;
    for (double v : r) x(i, j++) = v;
    ++i;
  }
  return x;
}

}  // namespace testing
