#pragma once

#include <memory>
#include <optional>
#include <variant>

#include "ushrink/kernels.hpp"
#include "ushrink/ustat.hpp"

namespace ushrink {

enum class Variant { General, Degenerate };

const char* to_string(Variant v) noexcept;

/// Outcome of one shrinkage-coefficient estimate.
///
/// `alpha_raw` is delta_hat / (delta_hat + dist_sq) and may fall outside
/// [0, 1] because the risk estimates are unbiased and can be negative on small
/// samples. `alpha` is the clamped value actually used to form the estimator.
/// When both delta_hat and dist_sq are zero, alpha_raw = alpha = 0.
struct ShrinkageReport {
  double delta_hat = 0.0;
  double dist_sq = 0.0;
  double alpha_raw = 0.0;
  double alpha = 0.0;
  Variant variant = Variant::General;
};

struct AlphaPair {
  double alpha_raw = 0.0;
  double alpha = 0.0;
};

AlphaPair alpha_from(double delta_hat, double dist_sq);

/// Builds a report, snapping dist_sq values in (-1e-9, 0) to zero.
/// Throws InputError on a materially negative dist_sq.
ShrinkageReport make_report(double delta_hat, double dist_sq, Variant variant);

// ---------------------------------------------------------------------------
// Generic estimators of the risk Delta through kappa functions.

/// Inner product <r(A), r(B)> of the Hilbert-valued U-statistic kernel r at
/// two k-tuples of observation indices.
using InnerFn = std::function<double(const Dataset& data, std::span<const Index> a, std::span<const Index> b)>;

/// kappa_m for m = k..2k, where for m = 2k - i
///   kappa_m(x_1..x_m) = <r(x_1..x_k), r(x_1..x_i, x_{k+1}..x_m)>.
class KappaFamily {
 public:
  KappaFamily(int k, InnerFn inner);

  [[nodiscard]] int k() const noexcept { return k_; }
  /// Throws ParameterError unless k <= m <= 2k.
  [[nodiscard]] const EvalFn& order(int m) const;

 private:
  int k_;
  std::vector<EvalFn> by_order_;
};

/// k = 1 family of a mean element, r(x) = K(., x): kappa_1 = K(x, x), kappa_2 = K(x1, x2).
KappaFamily mean_kappa_family(const GramMatrix& gram);

/// k = 2 family of the covariance operator,
/// r(x, y) = (K(., x) - K(., y)) (x) (K(., x) - K(., y)) / 2, so that
/// <r(x, y), r(u, v)> = [K(x,u) - K(x,v) - K(y,u) + K(y,v)]^2 / 4.
KappaFamily covop_kappa_family(const GramMatrix& gram);

/// Unbiased risk estimate via the variance decomposition:
///   sum_{i=1..k} w[i] (U[kappa_{2k-i}] - U[kappa_{2k}]),
/// all U-statistics in permutation form.
double delta_general(const KappaFamily& kappa, const Dataset& data, int k, const EnumerationOptions& opts = {});

/// Risk estimate assuming complete degeneracy:
///   (U[kappa_k] - U[kappa_{2k}]) / nCk.
double delta_degen(const EvalFn& kappa_k, const EvalFn& kappa_2k, const Dataset& data, int k,
                   const EnumerationOptions& opts = {});
double delta_degen(const KappaFamily& kappa, const Dataset& data, int k, const EnumerationOptions& opts = {});

// ---------------------------------------------------------------------------
// Mean elements in an RKHS.

struct ZeroTarget {};

/// f* = sum_j coefficients[j] K(., landmarks_j).
struct DualTarget {
  Dataset landmarks;
  Vector coefficients;
};

using TargetSpec = std::variant<ZeroTarget, DualTarget>;

/// Gram blocks needed for a dual target: cross(i, j) = K(X_i, Z_j) and
/// target(j, l) = K(Z_j, Z_l).
struct TargetBlocks {
  Matrix cross;
  Matrix target;
};

/// sum_i data_weights[i] K(., X_i) + sum_j target_weights[j] K(., Z_j).
struct DualMeanElement {
  Vector data_weights;
  Vector target_weights;
  std::optional<Dataset> landmarks;
};

struct MeanShrinkResult {
  DualMeanElement element;
  ShrinkageReport report;
};

/// Closed-form shrinkage of the empirical mean embedding from its Gram matrix.
MeanShrinkResult shrink_mean(const GramMatrix& gram, const TargetSpec& target,
                             const std::optional<TargetBlocks>& blocks = std::nullopt);

/// Convenience overload computing the Gram blocks from a kernel.
MeanShrinkResult shrink_mean(const KernelSpec& spec, const Dataset& data, const TargetSpec& target);

TargetBlocks target_blocks(const KernelSpec& spec, const Dataset& data, const DualTarget& target);

/// (1 - alpha) * mean + alpha * f* for a fixed alpha in [0, 1].
DualMeanElement shrunk_element(Index n, const TargetSpec& target, double alpha);

/// alpha / (1 - alpha): the ridge parameter whose penalized least-squares
/// solution coincides with the alpha-shrunk estimator.
double regularization_parameter(double alpha);

/// ||elem||^2 from the Gram blocks. Zero target weights need no blocks.
double squared_norm(const DualMeanElement& elem, const GramMatrix& gram,
                    const std::optional<TargetBlocks>& blocks = std::nullopt);

/// Pointwise value of the element via the reproducing property.
double evaluate_mean(const DualMeanElement& elem, const KernelSpec& spec, const Dataset& data, const PointRef& x);

// ---------------------------------------------------------------------------
// Covariance operators in an RKHS (zero target).

/// The three Gram functionals of the covariance-operator risk estimates,
/// each summed over ordered tuples of distinct indices:
///   pair   = sum_{i!=j}       [K_ii - 2K_ij + K_jj]^2
///   triple = sum_{i!=j!=l}    [K_ii - K_il - K_ij + K_jl]^2
///   quad   = sum_{i!=j!=l!=m} [K_il - K_im - K_jl + K_jm]^2
/// plus ||C_hat||^2 for the U-statistic covariance operator C_hat.
struct CovopGramSums {
  double pair = 0.0;
  double triple = 0.0;
  double quad = 0.0;
  double norm_sq = 0.0;
};

/// O(n^3) evaluation through the doubly centered Gram matrix. Requires n >= 4.
CovopGramSums covop_gram_sums(const GramMatrix& gram);

ShrinkageReport shrink_covop(const GramMatrix& gram);
ShrinkageReport shrink_covop_degen(const GramMatrix& gram);

}  // namespace ushrink
