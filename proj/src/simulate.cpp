#include "ushrink/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "ushrink/covmat.hpp"
#include "ushrink/errors.hpp"
#include "ushrink/normalmean.hpp"
#include "ushrink/summation.hpp"

namespace ushrink {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_reps(std::int64_t reps, const char* what) {
  if (reps < kMinReplications) {
    throw ParameterError(std::string(what) + ": need at least " + std::to_string(kMinReplications) +
                         " replications, got " + std::to_string(reps));
  }
}

unsigned worker_count(const McOptions& opts, std::int64_t reps) {
  unsigned t = opts.threads != 0 ? opts.threads : std::max(1U, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::int64_t>(t, reps));
}

// Fills out[r] = fn(r) for r in [0, size) using contiguous blocks per worker.
template <class Fn>
void parallel_fill(std::vector<double>& out, unsigned workers, Fn&& fn) {
  const auto size = static_cast<std::int64_t>(out.size());
  if (workers <= 1) {
    for (std::int64_t r = 0; r < size; ++r) out[static_cast<std::size_t>(r)] = fn(r);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::int64_t lo = size * w / workers;
        const std::int64_t hi = size * (w + 1) / workers;
        try {
          for (std::int64_t r = lo; r < hi; ++r) out[static_cast<std::size_t>(r)] = fn(r);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double gaussian_bandwidth(const KernelSpec& kernel) { return std::get<GaussianKernel>(kernel).bandwidth; }

// E exp(-(U - U')^2 / h), U, U' ~ Uniform(lo, hi) independent, a = (hi - lo) / sqrt(h).
double uniform_pair_factor(double a) {
  if (a < 1e-4) return 1.0 - a * a / 6.0;
  return (std::sqrt(std::numbers::pi) * a * std::erf(a) + std::exp(-a * a) - 1.0) / (a * a);
}

[[noreturn]] void unsupported_kernel(const char* what) {
  throw CapabilityError(std::string(what) + ": closed-form kernel moments exist only for the linear and gaussian kernels");
}

// E ||Xt||^4 for centered X with independent coordinates.
double centered_fourth_moment(const DistSpec& dist) {
  const Vector var = dist_variances(dist);
  const double tr = var.sum();
  const double sum_sq = var.squaredNorm();
  double marginal4 = 0.0;
  if (const auto* u = std::get_if<UniformBox>(&dist)) {
    for (Index k = 0; k < var.size(); ++k) marginal4 += std::pow(u->hi(k) - u->lo(k), 4) / 80.0;
  } else {
    marginal4 = 3.0 * sum_sq;
  }
  return marginal4 + tr * tr - sum_sq;
}

bool is_mean_estimator(const EstimatorSpec& est) {
  return std::holds_alternative<SampleMean>(est) || std::holds_alternative<MuCheck>(est) ||
         std::holds_alternative<MuCheckC>(est) || std::holds_alternative<FixedShrinkMean>(est);
}

double embedding_risk(const MeanEmbedShrink& est, const DistSpec& dist, const Dataset& data) {
  const GramMatrix g = gram(est.kernel, data);
  std::optional<TargetBlocks> blocks;
  if (const auto* dual = std::get_if<DualTarget>(&est.target)) blocks = target_blocks(est.kernel, data, *dual);
  const MeanShrinkResult res = shrink_mean(g, est.target, blocks);
  const DualMeanElement& e = res.element;

  // ||C_check - C||^2 = ||C_check||^2 - 2 <C_check, C> + ||C||^2, with
  // <K(., x), C> = E K(x, Y).
  CompensatedSum inner;
  for (Index i = 0; i < data.rows(); ++i) inner += e.data_weights(i) * kernel_mean_map(est.kernel, dist, data.row(i));
  if (e.landmarks) {
    for (Index j = 0; j < e.landmarks->rows(); ++j) {
      inner += e.target_weights(j) * kernel_mean_map(est.kernel, dist, e.landmarks->row(j));
    }
  }
  const double risk = squared_norm(e, g, blocks) - 2.0 * inner.value() + kernel_mean_sq_norm(est.kernel, dist);
  return std::max(risk, 0.0);
}

}  // namespace

// ---------------------------------------------------------------------------

void validate(const DistSpec& dist) {
  std::visit(Overloaded{
                 [](const SphericalGaussian& g) {
                   if (g.mu.size() < 1) throw ParameterError("spherical gaussian: need dimension >= 1");
                   if (!(g.sigma > 0.0) || !std::isfinite(g.sigma)) {
                     throw ParameterError("spherical gaussian: sigma must be positive and finite");
                   }
                 },
                 [](const DiagGaussian& g) {
                   if (g.mu.size() < 1) throw ParameterError("diagonal gaussian: need dimension >= 1");
                   if (g.sigmas.size() != g.mu.size()) {
                     throw ParameterError("diagonal gaussian: sigmas and mu have different dimensions");
                   }
                   if (!(g.sigmas.array() > 0.0).all() || !g.sigmas.allFinite()) {
                     throw ParameterError("diagonal gaussian: every sigma must be positive and finite");
                   }
                 },
                 [](const UniformBox& u) {
                   if (u.lo.size() < 1) throw ParameterError("uniform box: need dimension >= 1");
                   if (u.lo.size() != u.hi.size()) throw ParameterError("uniform box: lo and hi have different dimensions");
                   if (!(u.lo.array() < u.hi.array()).all() || !u.lo.allFinite() || !u.hi.allFinite()) {
                     throw ParameterError("uniform box: need finite lo < hi in every coordinate");
                   }
                 },
             },
             dist);
}

Index dimension(const DistSpec& dist) {
  return std::visit(Overloaded{
                        [](const SphericalGaussian& g) { return g.mu.size(); },
                        [](const DiagGaussian& g) { return g.mu.size(); },
                        [](const UniformBox& u) { return u.lo.size(); },
                    },
                    dist);
}

Vector dist_mean(const DistSpec& dist) {
  return std::visit(Overloaded{
                        [](const SphericalGaussian& g) -> Vector { return g.mu; },
                        [](const DiagGaussian& g) -> Vector { return g.mu; },
                        [](const UniformBox& u) -> Vector { return 0.5 * (u.lo + u.hi); },
                    },
                    dist);
}

Vector dist_variances(const DistSpec& dist) {
  return std::visit(Overloaded{
                        [](const SphericalGaussian& g) -> Vector {
                          return Vector::Constant(g.mu.size(), g.sigma * g.sigma);
                        },
                        [](const DiagGaussian& g) -> Vector { return g.sigmas.array().square(); },
                        [](const UniformBox& u) -> Vector { return (u.hi - u.lo).array().square() / 12.0; },
                    },
                    dist);
}

Matrix dist_covariance(const DistSpec& dist) { return dist_variances(dist).asDiagonal(); }

Dataset sample(const DistSpec& dist, Index n, std::uint64_t seed) {
  validate(dist);
  if (n < 1) throw ParameterError("sample: need n >= 1");
  const Index d = dimension(dist);
  std::mt19937_64 rng(seed);
  Dataset out(n, d);
  std::visit(Overloaded{
                 [&](const SphericalGaussian& g) {
                   std::normal_distribution<double> z(0.0, 1.0);
                   for (Index i = 0; i < n; ++i)
                     for (Index k = 0; k < d; ++k) out(i, k) = g.mu(k) + g.sigma * z(rng);
                 },
                 [&](const DiagGaussian& g) {
                   std::normal_distribution<double> z(0.0, 1.0);
                   for (Index i = 0; i < n; ++i)
                     for (Index k = 0; k < d; ++k) out(i, k) = g.mu(k) + g.sigmas(k) * z(rng);
                 },
                 [&](const UniformBox& u) {
                   std::uniform_real_distribution<double> v(0.0, 1.0);
                   for (Index i = 0; i < n; ++i)
                     for (Index k = 0; k < d; ++k) out(i, k) = u.lo(k) + (u.hi(k) - u.lo(k)) * v(rng);
                 },
             },
             dist);
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian kernel exp(-||x - y||^2 / h) moments, coordinate by coordinate:
//   Y ~ N(m, s^2):      E exp(-(x - Y)^2 / h)  = (1 + 2 s^2 / h)^(-1/2) exp(-(x - m)^2 / (h + 2 s^2))
//                       E exp(-(Y - Y')^2 / h) = (1 + 4 s^2 / h)^(-1/2)
//   Y ~ U(lo, hi):      E exp(-(x - Y)^2 / h)  = sqrt(pi h) / (2 L) [erf((hi - x)/sqrt h) - erf((lo - x)/sqrt h)]
//                       E exp(-(Y - Y')^2 / h) = (sqrt(pi) a erf(a) + exp(-a^2) - 1) / a^2,  a = L / sqrt(h)

double kernel_mean_map(const KernelSpec& kernel, const DistSpec& dist, const PointRef& x) {
  validate(dist);
  if (x.size() != dimension(dist)) throw InputError("kernel_mean_map: dimension mismatch");
  if (std::holds_alternative<LinearKernel>(kernel)) return x.dot(dist_mean(dist).transpose());
  if (!std::holds_alternative<GaussianKernel>(kernel)) unsupported_kernel("kernel_mean_map");
  const double h = gaussian_bandwidth(kernel);
  double out = 1.0;
  if (const auto* u = std::get_if<UniformBox>(&dist)) {
    const double sh = std::sqrt(h);
    for (Index k = 0; k < x.size(); ++k) {
      const double len = u->hi(k) - u->lo(k);
      out *= std::sqrt(std::numbers::pi * h) / (2.0 * len) *
             (std::erf((u->hi(k) - x(k)) / sh) - std::erf((u->lo(k) - x(k)) / sh));
    }
    return out;
  }
  const Vector mu = dist_mean(dist);
  const Vector var = dist_variances(dist);
  for (Index k = 0; k < x.size(); ++k) {
    const double diff = x(k) - mu(k);
    out *= std::exp(-diff * diff / (h + 2.0 * var(k))) / std::sqrt(1.0 + 2.0 * var(k) / h);
  }
  return out;
}

double kernel_mean_sq_norm(const KernelSpec& kernel, const DistSpec& dist) {
  validate(dist);
  if (std::holds_alternative<LinearKernel>(kernel)) return dist_mean(dist).squaredNorm();
  if (!std::holds_alternative<GaussianKernel>(kernel)) unsupported_kernel("kernel_mean_sq_norm");
  const double h = gaussian_bandwidth(kernel);
  double out = 1.0;
  if (const auto* u = std::get_if<UniformBox>(&dist)) {
    for (Index k = 0; k < u->lo.size(); ++k) out *= uniform_pair_factor((u->hi(k) - u->lo(k)) / std::sqrt(h));
    return out;
  }
  const Vector var = dist_variances(dist);
  for (Index k = 0; k < var.size(); ++k) out /= std::sqrt(1.0 + 4.0 * var(k) / h);
  return out;
}

double kernel_diag_mean(const KernelSpec& kernel, const DistSpec& dist) {
  validate(dist);
  if (std::holds_alternative<LinearKernel>(kernel)) {
    return dist_mean(dist).squaredNorm() + dist_variances(dist).sum();
  }
  if (std::holds_alternative<GaussianKernel>(kernel)) return 1.0;
  unsupported_kernel("kernel_diag_mean");
}

// ---------------------------------------------------------------------------

std::string describe(const EstimatorSpec& est) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const SampleMean&) { os << "sample_mean"; },
                 [&](const MuCheck&) { os << "mu_check"; },
                 [&](const MuCheckC& e) { os << "mu_check_c(c=" << e.c << ")"; },
                 [&](const FixedShrinkMean& e) { os << "fixed_shrink_mean(alpha=" << e.alpha << ")"; },
                 [&](const MeanEmbedShrink& e) {
                   os << "mean_embed_shrink(kernel=";
                   std::visit(Overloaded{
                                  [&](const LinearKernel&) { os << "linear"; },
                                  [&](const GaussianKernel& k) { os << "gaussian:" << k.bandwidth; },
                                  [&](const ExponentialKernel& k) { os << "exponential:" << k.scale; },
                                  [&](const PrecomputedKernel&) { os << "precomputed"; },
                              },
                              e.kernel);
                   os << ",target=" << (std::holds_alternative<ZeroTarget>(e.target) ? "zero" : "dual") << ")";
                 },
                 [&](const CovMatShrink& e) {
                   os << "cov_mat_shrink(tau=" << e.tau << ",variant=" << to_string(e.variant) << ")";
                 },
                 [&](const CovMatPlain&) { os << "cov_mat_plain"; },
             },
             est);
  return os.str();
}

double squared_error(const EstimatorSpec& est, const DistSpec& dist, const Dataset& data) {
  if (data.cols() != dimension(dist)) throw InputError("squared_error: data and distribution dimensions differ");
  return std::visit(
      Overloaded{
          [&](const SampleMean&) {
            return (data.colwise().mean().transpose() - dist_mean(dist)).squaredNorm();
          },
          [&](const MuCheck&) { return (mu_check(data).estimate - dist_mean(dist)).squaredNorm(); },
          [&](const MuCheckC& e) { return (mu_check_c(data, e.c).estimate - dist_mean(dist)).squaredNorm(); },
          [&](const FixedShrinkMean& e) {
            if (!(e.alpha >= 0.0 && e.alpha <= 1.0)) throw ParameterError("fixed_shrink_mean: alpha must lie in [0, 1]");
            const Vector xbar = data.colwise().mean().transpose();
            return ((1.0 - e.alpha) * xbar - dist_mean(dist)).squaredNorm();
          },
          [&](const MeanEmbedShrink& e) { return embedding_risk(e, dist, data); },
          [&](const CovMatShrink& e) {
            return (shrink_cov_matrix(data, e.tau, e.variant).shrunk - dist_covariance(dist)).squaredNorm();
          },
          [&](const CovMatPlain&) {
            if (data.rows() < 2) throw InsufficientSampleError("cov_mat_plain: need n >= 2");
            const Point mean = data.colwise().mean();
            const Dataset xt = data.rowwise() - mean;
            const Matrix c = (xt.transpose() * xt) / static_cast<double>(data.rows() - 1);
            return (c - dist_covariance(dist)).squaredNorm();
          },
      },
      est);
}

// ---------------------------------------------------------------------------

McSummary summarize(std::span<const double> values, std::uint64_t seed) {
  McSummary out;
  out.reps = static_cast<std::int64_t>(values.size());
  out.seed = seed;
  if (values.empty()) return out;
  CompensatedSum sum;
  for (double v : values) sum += v;
  out.mean = sum.value() / static_cast<double>(values.size());
  if (values.size() > 1) {
    CompensatedSum ss;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    const double var = ss.value() / static_cast<double>(values.size() - 1);
    out.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return out;
}

std::vector<double> mc_values(const Statistic& stat, const DistSpec& dist, Index n, std::int64_t reps,
                              std::uint64_t seed, const McOptions& opts) {
  check_reps(reps, "mc_values");
  validate(dist);
  std::vector<double> out(static_cast<std::size_t>(reps));
  parallel_fill(out, worker_count(opts, reps),
                [&](std::int64_t r) { return stat(sample(dist, n, seed + static_cast<std::uint64_t>(r))); });
  return out;
}

McSummary mc_mean(const Statistic& stat, const DistSpec& dist, Index n, std::int64_t reps, std::uint64_t seed,
                  const McOptions& opts) {
  const std::vector<double> v = mc_values(stat, dist, n, reps, seed, opts);
  return summarize(v, seed);
}

RiskEstimate mc_risk(const EstimatorSpec& est, const DistSpec& dist, Index n, std::int64_t reps,
                     std::uint64_t seed, const McOptions& opts) {
  check_reps(reps, "mc_risk");
  validate(dist);
  const McSummary s =
      mc_mean([&](const Dataset& data) { return squared_error(est, dist, data); }, dist, n, reps, seed, opts);
  return RiskEstimate{s.mean, s.std_error, s.reps, s.seed};
}

PairedRisk mc_compare(const EstimatorSpec& a, const EstimatorSpec& b, const DistSpec& dist, Index n,
                      std::int64_t reps, std::uint64_t seed, const McOptions& opts) {
  check_reps(reps, "mc_compare");
  validate(dist);
  std::vector<double> loss_a(static_cast<std::size_t>(reps));
  std::vector<double> loss_b(static_cast<std::size_t>(reps));
  if (n < 1) throw ParameterError("mc_compare: need n >= 1");
  std::vector<double> diff(static_cast<std::size_t>(reps));
  parallel_fill(diff, worker_count(opts, reps), [&](std::int64_t r) {
    const Dataset data = sample(dist, n, seed + static_cast<std::uint64_t>(r));
    const auto idx = static_cast<std::size_t>(r);
    loss_a[idx] = squared_error(a, dist, data);
    loss_b[idx] = squared_error(b, dist, data);
    return loss_a[idx] - loss_b[idx];
  });
  const McSummary sa = summarize(loss_a, seed);
  const McSummary sb = summarize(loss_b, seed);
  return PairedRisk{RiskEstimate{sa.mean, sa.std_error, sa.reps, seed},
                    RiskEstimate{sb.mean, sb.std_error, sb.reps, seed}, summarize(diff, seed)};
}

double oracle_alpha(const DistSpec& dist, const EstimatorSpec& est, Index n) {
  validate(dist);
  if (n < 1) throw ParameterError("oracle_alpha: need n >= 1");
  const auto nd = static_cast<double>(n);
  double delta = 0.0;
  double dist_sq = 0.0;
  if (is_mean_estimator(est)) {
    // k = 1, linear kernel, f* = 0.
    delta = dist_variances(dist).sum() / nd;
    dist_sq = dist_mean(dist).squaredNorm();
  } else if (const auto* e = std::get_if<MeanEmbedShrink>(&est)) {
    const double c_norm = kernel_mean_sq_norm(e->kernel, dist);
    delta = (kernel_diag_mean(e->kernel, dist) - c_norm) / nd;
    dist_sq = c_norm;
    if (const auto* dual = std::get_if<DualTarget>(&e->target)) {
      if (dual->landmarks.rows() != dual->coefficients.size()) {
        throw InputError("oracle_alpha: dual target landmark and coefficient counts differ");
      }
      CompensatedSum cross;
      for (Index j = 0; j < dual->landmarks.rows(); ++j) {
        cross += dual->coefficients(j) * kernel_mean_map(e->kernel, dist, dual->landmarks.row(j));
      }
      const Vector& b = dual->coefficients;
      dist_sq += -2.0 * cross.value() + b.dot(gram(e->kernel, dual->landmarks).entries() * b);
    }
  } else if (const auto* e = std::get_if<CovMatShrink>(&est)) {
    if (n < 2) throw InsufficientSampleError("oracle_alpha: covariance risk needs n >= 2");
    // Risk of the pairwise U-statistic covariance:
    //   ((n-1) E||Xt||^4 - (n-2) Tr[S^2] + Tr^2[S]) / (n (n-1)).
    const Vector var = dist_variances(dist);
    const double tr = var.sum();
    const double tr_s2 = var.squaredNorm();
    delta = ((nd - 1.0) * centered_fourth_moment(dist) - (nd - 2.0) * tr_s2 + tr * tr) / (nd * (nd - 1.0));
    dist_sq = (var.array() - e->tau).square().sum();
  } else {
    throw CapabilityError("oracle_alpha: no analytic shrinkage target for " + describe(est));
  }
  return alpha_from(delta, dist_sq).alpha;
}

double rate_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw InputError("rate_slope: need at least 2 points");
  CompensatedSum sx;
  CompensatedSum sy;
  for (const auto& [n, risk] : points) {
    if (!(n > 0.0) || !(risk > 0.0)) throw InputError("rate_slope: n and risk must be positive");
    sx += std::log(n);
    sy += std::log(risk);
  }
  const double m = static_cast<double>(points.size());
  const double mx = sx.value() / m;
  const double my = sy.value() / m;
  CompensatedSum sxy;
  CompensatedSum sxx;
  for (const auto& [n, risk] : points) {
    const double dx = std::log(n) - mx;
    sxy += dx * (std::log(risk) - my);
    sxx += dx * dx;
  }
  if (sxx.value() == 0.0) throw InputError("rate_slope: all sample sizes are equal");
  return sxy.value() / sxx.value();
}

}  // namespace ushrink
