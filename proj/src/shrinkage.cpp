#include "ushrink/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ushrink/errors.hpp"
#include "ushrink/summation.hpp"

namespace ushrink {
namespace {

constexpr double kNegativeSnap = 1e-9;

double binomial(Index n, int k) {
  long double out = 1.0L;
  for (int t = 1; t <= k; ++t) out = out * static_cast<long double>(n - k + t) / t;
  return static_cast<double>(out);
}

double falling(Index n, int m) {
  long double out = 1.0L;
  for (int t = 0; t < m; ++t) out *= static_cast<long double>(n - t);
  return static_cast<double>(out);
}

void require_n(Index n, Index min_n, const char* what) {
  if (n < min_n) {
    throw InsufficientSampleError(std::string(what) + ": need n >= " + std::to_string(min_n) +
                                  ", got n=" + std::to_string(n));
  }
}

Matrix double_center(const Matrix& g) {
  const Vector row_mean = g.rowwise().mean();
  const Vector col_mean = g.colwise().mean().transpose();
  const double grand = g.mean();
  Matrix out = g;
  out.colwise() -= row_mean;
  out.rowwise() -= col_mean.transpose();
  out.array() += grand;
  return Matrix(0.5 * (out + out.transpose()));
}

double weighted_kernel_sum(const KernelSpec& spec, const Dataset& points, const Vector& weights,
                           const PointRef& x) {
  CompensatedSum acc;
  for (Index i = 0; i < points.rows(); ++i) {
    if (weights(i) != 0.0) acc += weights(i) * eval_kernel(spec, x, points.row(i));
  }
  return acc.value();
}

}  // namespace

const char* to_string(Variant v) noexcept { return v == Variant::General ? "general" : "degenerate"; }

AlphaPair alpha_from(double delta_hat, double dist_sq) {
  const double denom = delta_hat + dist_sq;
  AlphaPair out;
  out.alpha_raw = denom != 0.0 ? delta_hat / denom : 0.0;
  out.alpha = std::clamp(out.alpha_raw, 0.0, 1.0);
  return out;
}

ShrinkageReport make_report(double delta_hat, double dist_sq, Variant variant) {
  if (dist_sq < 0.0) {
    if (dist_sq > -kNegativeSnap) {
      dist_sq = 0.0;
    } else {
      throw InputError("shrinkage: squared distance is negative (" + std::to_string(dist_sq) +
                       "); is the kernel positive definite?");
    }
  }
  const AlphaPair a = alpha_from(delta_hat, dist_sq);
  return ShrinkageReport{delta_hat, dist_sq, a.alpha_raw, a.alpha, variant};
}

// ---------------------------------------------------------------------------

KappaFamily::KappaFamily(int k, InnerFn inner) : k_(k) {
  if (k < 1) throw ParameterError("KappaFamily: need k >= 1");
  if (k > 32) throw ParameterError("KappaFamily: k > 32 is not supported");
  auto shared = std::make_shared<InnerFn>(std::move(inner));
  for (int m = k; m <= 2 * k; ++m) {
    const int shared_args = 2 * k - m;
    EvalFn fn;
    fn.order = m;
    fn.symmetric = false;
    fn.body = [shared, k, shared_args](const Dataset& data, std::span<const Index> t) {
      // A = t[0..k), B = t[0..i) ++ t[k..m) with i = shared_args.
      Index b[64];
      const auto ku = static_cast<std::size_t>(k);
      const auto iu = static_cast<std::size_t>(shared_args);
      for (std::size_t p = 0; p < iu; ++p) b[p] = t[p];
      for (std::size_t p = ku; p < t.size(); ++p) b[iu + p - ku] = t[p];
      return (*shared)(data, t.first(ku), std::span<const Index>(b, ku));
    };
    by_order_.push_back(std::move(fn));
  }
}

const EvalFn& KappaFamily::order(int m) const {
  if (m < k_ || m > 2 * k_) {
    throw ParameterError("KappaFamily: order " + std::to_string(m) + " outside [" + std::to_string(k_) +
                         ", " + std::to_string(2 * k_) + "]");
  }
  return by_order_[static_cast<std::size_t>(m - k_)];
}

KappaFamily mean_kappa_family(const GramMatrix& gram) {
  auto g = std::make_shared<const GramMatrix>(gram);
  return KappaFamily(1, [g](const Dataset&, std::span<const Index> a, std::span<const Index> b) {
    return (*g)(a[0], b[0]);
  });
}

KappaFamily covop_kappa_family(const GramMatrix& gram) {
  auto g = std::make_shared<const GramMatrix>(gram);
  return KappaFamily(2, [g](const Dataset&, std::span<const Index> a, std::span<const Index> b) {
    const GramMatrix& k = *g;
    const double d = k(a[0], b[0]) - k(a[0], b[1]) - k(a[1], b[0]) + k(a[1], b[1]);
    return 0.25 * d * d;
  });
}

double delta_general(const KappaFamily& kappa, const Dataset& data, int k, const EnumerationOptions& opts) {
  if (kappa.k() != k) throw ContractError("delta_general: kappa family was built for a different k");
  require_n(data.rows(), 2 * static_cast<Index>(k), "delta_general");
  const CombWeights w = comb_weights(data.rows(), k);
  const double u_2k = u_stat_perm(kappa.order(2 * k), data, 2 * k, opts);
  CompensatedSum acc;
  for (int i = 1; i <= k; ++i) {
    const int m = 2 * k - i;
    acc += w.w[static_cast<std::size_t>(i)] * (u_stat_perm(kappa.order(m), data, m, opts) - u_2k);
  }
  return acc.value();
}

double delta_degen(const EvalFn& kappa_k, const EvalFn& kappa_2k, const Dataset& data, int k,
                   const EnumerationOptions& opts) {
  if (k < 1) throw ParameterError("delta_degen: need k >= 1");
  require_n(data.rows(), 2 * static_cast<Index>(k), "delta_degen");
  const double u_k = u_stat_perm(kappa_k, data, k, opts);
  const double u_2k = u_stat_perm(kappa_2k, data, 2 * k, opts);
  return (u_k - u_2k) / binomial(data.rows(), k);
}

double delta_degen(const KappaFamily& kappa, const Dataset& data, int k, const EnumerationOptions& opts) {
  if (kappa.k() != k) throw ContractError("delta_degen: kappa family was built for a different k");
  return delta_degen(kappa.order(k), kappa.order(2 * k), data, k, opts);
}

// ---------------------------------------------------------------------------

TargetBlocks target_blocks(const KernelSpec& spec, const Dataset& data, const DualTarget& target) {
  if (target.landmarks.rows() != target.coefficients.size()) {
    throw InputError("dual target: " + std::to_string(target.landmarks.rows()) + " landmarks but " +
                     std::to_string(target.coefficients.size()) + " coefficients");
  }
  Dataset lm = target.landmarks;
  return TargetBlocks{cross_gram(spec, data, lm), gram(spec, lm).entries()};
}

MeanShrinkResult shrink_mean(const GramMatrix& gram, const TargetSpec& target,
                             const std::optional<TargetBlocks>& blocks) {
  const Index n = gram.size();
  require_n(n, 2, "shrink_mean");
  const Matrix& g = gram.entries();
  const double nd = static_cast<double>(n);

  CompensatedSum diag;
  CompensatedSum off;
  CompensatedSum all;
  for (Index i = 0; i < n; ++i) {
    diag += g(i, i);
    for (Index j = 0; j < n; ++j) {
      all += g(i, j);
      if (i != j) off += g(i, j);
    }
  }
  const double delta_hat = (diag.value() / nd - off.value() / (nd * (nd - 1.0))) / nd;
  double dist_sq = all.value() / (nd * nd);

  const auto* dual = std::get_if<DualTarget>(&target);
  if (dual != nullptr) {
    const Index m = dual->coefficients.size();
    if (dual->landmarks.rows() != m) {
      throw InputError("shrink_mean: dual target has " + std::to_string(dual->landmarks.rows()) +
                       " landmarks but " + std::to_string(m) + " coefficients");
    }
    if (!blocks) throw InputError("shrink_mean: a dual target requires the cross and target Gram blocks");
    if (blocks->cross.rows() != n || blocks->cross.cols() != m) {
      throw InputError("shrink_mean: cross Gram block must be n x landmarks");
    }
    if (blocks->target.rows() != m || blocks->target.cols() != m) {
      throw InputError("shrink_mean: target Gram block must be landmarks x landmarks");
    }
    const Vector& b = dual->coefficients;
    const double cross_term = (blocks->cross * b).sum() / nd;
    const double target_norm = b.dot(blocks->target * b);
    dist_sq = dist_sq - 2.0 * cross_term + target_norm;
  }

  ShrinkageReport report = make_report(delta_hat, dist_sq, Variant::General);
  return MeanShrinkResult{shrunk_element(n, target, report.alpha), report};
}

MeanShrinkResult shrink_mean(const KernelSpec& spec, const Dataset& data, const TargetSpec& target) {
  const GramMatrix g = gram(spec, data);
  if (const auto* dual = std::get_if<DualTarget>(&target)) {
    return shrink_mean(g, target, target_blocks(spec, data, *dual));
  }
  return shrink_mean(g, target);
}

DualMeanElement shrunk_element(Index n, const TargetSpec& target, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("shrunk_element: alpha must lie in [0, 1]");
  DualMeanElement out;
  out.data_weights = Vector::Constant(n, (1.0 - alpha) / static_cast<double>(n));
  if (const auto* dual = std::get_if<DualTarget>(&target)) {
    out.target_weights = alpha * dual->coefficients;
    out.landmarks = dual->landmarks;
  } else {
    out.target_weights = Vector(0);
  }
  return out;
}

double regularization_parameter(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("regularization_parameter: alpha must lie in [0, 1)");
  return alpha / (1.0 - alpha);
}

double squared_norm(const DualMeanElement& elem, const GramMatrix& gram, const std::optional<TargetBlocks>& blocks) {
  const Vector& a = elem.data_weights;
  const Vector& b = elem.target_weights;
  if (a.size() != gram.size()) throw InputError("squared_norm: weight count does not match the Gram matrix");
  double out = a.dot(gram.entries() * a);
  if (b.size() > 0 && b.cwiseAbs().maxCoeff() > 0.0) {
    if (!blocks) throw InputError("squared_norm: nonzero target weights require the Gram blocks");
    out += 2.0 * a.dot(blocks->cross * b) + b.dot(blocks->target * b);
  }
  return out;
}

double evaluate_mean(const DualMeanElement& elem, const KernelSpec& spec, const Dataset& data, const PointRef& x) {
  if (is_precomputed(spec)) {
    throw UnsupportedOperationError("evaluate_mean: a precomputed kernel cannot be evaluated at new points");
  }
  if (elem.data_weights.size() != data.rows()) {
    throw InputError("evaluate_mean: weight count does not match the dataset");
  }
  double out = weighted_kernel_sum(spec, data, elem.data_weights, x);
  if (elem.target_weights.size() > 0) {
    if (!elem.landmarks || elem.landmarks->rows() != elem.target_weights.size()) {
      throw InputError("evaluate_mean: target weights without matching landmarks");
    }
    out += weighted_kernel_sum(spec, *elem.landmarks, elem.target_weights, x);
  }
  return out;
}

// ---------------------------------------------------------------------------

CovopGramSums covop_gram_sums(const GramMatrix& gram) {
  const Index n = gram.size();
  require_n(n, 4, "covop_gram_sums");
  // Every functional depends on differences K(., X_i) - K(., X_j) only, so the
  // doubly centered Gram gives the same sums with less cancellation.
  const Matrix kc = double_center(gram.entries());
  const Matrix k2 = kc * kc;
  const Vector row = kc.rowwise().sum();
  const double fro2 = kc.squaredNorm();
  const double nd = static_cast<double>(n);

  CompensatedSum pair;
  CompensatedSum triple;
  CompensatedSum quad;
  Vector c(n);
  for (Index i = 0; i < n; ++i) {
    // triple: for fixed i, D_jl = <phi_i - phi_j, phi_i - phi_l> = K_jl + c_j + c_l
    // with c_j = K_ii / 2 - K_ij; sum over j != l of D_jl^2.
    for (Index j = 0; j < n; ++j) c(j) = 0.5 * kc(i, i) - kc(i, j);
    const double csum = c.sum();
    double diag_sq = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double d = kc(j, j) + 2.0 * c(j);
      diag_sq += d * d;
    }
    triple += fro2 + 4.0 * c.dot(row) + 2.0 * nd * c.squaredNorm() + 2.0 * csum * csum - diag_sq;

    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double p = kc(i, i) - 2.0 * kc(i, j) + kc(j, j);
      pair += p * p;

      // quad: v_l = K_il - K_jl, summed over l != m outside {i, j}:
      // sum (v_l - v_m)^2 = 2 |S| sum_S v^2 - 2 (sum_S v)^2.
      const double vi = kc(i, i) - kc(j, i);
      const double vj = kc(i, j) - kc(j, j);
      const double sum_v = row(i) - row(j) - vi - vj;
      const double sum_v2 = k2(i, i) - 2.0 * k2(i, j) + k2(j, j) - vi * vi - vj * vj;
      quad += 2.0 * (nd - 2.0) * sum_v2 - 2.0 * sum_v * sum_v;
    }
  }
  return CovopGramSums{pair.value(), triple.value(), quad.value(), fro2 / ((nd - 1.0) * (nd - 1.0))};
}

ShrinkageReport shrink_covop(const GramMatrix& gram) {
  const Index n = gram.size();
  require_n(n, 4, "shrink_covop");
  const CovopGramSums s = covop_gram_sums(gram);
  const double nc2 = binomial(n, 2);
  const double nd = static_cast<double>(n);
  const double delta = (2.0 * nd - 4.0) / (4.0 * nc2 * falling(n, 3)) * s.triple +
                       1.0 / (4.0 * nc2 * falling(n, 2)) * s.pair -
                       (2.0 * nd - 3.0) / (4.0 * nc2 * falling(n, 4)) * s.quad;
  return make_report(delta, s.norm_sq, Variant::General);
}

ShrinkageReport shrink_covop_degen(const GramMatrix& gram) {
  const Index n = gram.size();
  require_n(n, 4, "shrink_covop_degen");
  const CovopGramSums s = covop_gram_sums(gram);
  const double nc2 = binomial(n, 2);
  const double delta = s.pair / (4.0 * nc2 * falling(n, 2)) - s.quad / (4.0 * nc2 * falling(n, 4));
  return make_report(delta, s.norm_sq, Variant::Degenerate);
}

}  // namespace ushrink
