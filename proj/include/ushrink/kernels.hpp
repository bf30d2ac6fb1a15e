#pragma once

#include <variant>

#include "ushrink/types.hpp"

namespace ushrink {

struct LinearKernel {};

/// K(x, y) = exp(-||x - y||^2 / bandwidth).
struct GaussianKernel {
  double bandwidth = 1.0;
};

/// K(x, y) = exp(<x, y> / scale).
struct ExponentialKernel {
  double scale = 1.0;
};

/// A user-supplied Gram matrix. It is not projected onto the PSD cone;
/// supplying a positive semi-definite matrix is the caller's responsibility.
struct PrecomputedKernel {
  Matrix matrix;
};

using KernelSpec = std::variant<LinearKernel, GaussianKernel, ExponentialKernel, PrecomputedKernel>;

/// Throws ParameterError / InputError when the spec violates its invariants.
void validate(const KernelSpec& spec);

[[nodiscard]] bool is_precomputed(const KernelSpec& spec) noexcept;

double eval_kernel(const KernelSpec& spec, const PointRef& x, const PointRef& y);

/// Symmetric matrix of pairwise kernel evaluations.
class GramMatrix {
 public:
  GramMatrix() = default;

  /// Symmetrizes `entries` as (G + G^T) / 2. Throws InputError if not square.
  explicit GramMatrix(Matrix entries);

  [[nodiscard]] Index size() const noexcept { return entries_.rows(); }
  [[nodiscard]] const Matrix& entries() const noexcept { return entries_; }
  [[nodiscard]] double operator()(Index i, Index j) const { return entries_(i, j); }

 private:
  Matrix entries_;
};

GramMatrix gram(const KernelSpec& spec, const Dataset& data);

/// Rectangular block K(X_i, Z_j), rows indexed by `rows`, columns by `cols`.
Matrix cross_gram(const KernelSpec& spec, const Dataset& rows, const Dataset& cols);

}  // namespace ushrink
