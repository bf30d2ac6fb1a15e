#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ushrink/kernels.hpp"
#include "ushrink/shrinkage.hpp"

namespace ushrink {

// ---------------------------------------------------------------------------
// Sampling distributions.

/// N(mu, sigma^2 I).
struct SphericalGaussian {
  Vector mu;
  double sigma = 1.0;
};

/// N(mu, diag(sigmas^2)).
struct DiagGaussian {
  Vector mu;
  Vector sigmas;
};

/// Independent Uniform(lo_k, hi_k) coordinates.
struct UniformBox {
  Vector lo;
  Vector hi;
};

using DistSpec = std::variant<SphericalGaussian, DiagGaussian, UniformBox>;

void validate(const DistSpec& dist);
Index dimension(const DistSpec& dist);
Vector dist_mean(const DistSpec& dist);
/// Per-coordinate variances; every supported distribution has independent coordinates.
Vector dist_variances(const DistSpec& dist);
Matrix dist_covariance(const DistSpec& dist);

/// n i.i.d. draws. The generator is std::mt19937_64 seeded with `seed`;
/// Gaussian coordinates come from std::normal_distribution and uniform ones
/// from std::uniform_real_distribution, drawn row by row. Identical arguments
/// give bitwise-identical datasets on a given build.
Dataset sample(const DistSpec& dist, Index n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Kernel moments of a distribution, used for RKHS risks.

/// E_Y K(x, Y). Linear kernel: any distribution. Gaussian kernel: all
/// supported distributions, in closed form. Otherwise CapabilityError.
double kernel_mean_map(const KernelSpec& kernel, const DistSpec& dist, const PointRef& x);

/// ||E K(., Y)||^2 = E K(Y, Y') for independent Y, Y'.
double kernel_mean_sq_norm(const KernelSpec& kernel, const DistSpec& dist);

/// E K(Y, Y).
double kernel_diag_mean(const KernelSpec& kernel, const DistSpec& dist);

// ---------------------------------------------------------------------------
// Estimators under test.

struct SampleMean {};
struct MuCheck {};
struct MuCheckC {
  double c = 1.0;
};
/// (1 - alpha) * xbar with alpha fixed in advance, e.g. the population oracle.
struct FixedShrinkMean {
  double alpha = 0.0;
};
struct MeanEmbedShrink {
  KernelSpec kernel = GaussianKernel{};
  TargetSpec target = ZeroTarget{};
};
struct CovMatShrink {
  double tau = 1.0;
  Variant variant = Variant::General;
};
struct CovMatPlain {};

using EstimatorSpec =
    std::variant<SampleMean, MuCheck, MuCheckC, FixedShrinkMean, MeanEmbedShrink, CovMatShrink, CovMatPlain>;

std::string describe(const EstimatorSpec& est);

/// Squared error of one estimate against the analytic estimand: Euclidean for
/// mean vectors, Frobenius for covariance matrices, RKHS norm for embeddings.
double squared_error(const EstimatorSpec& est, const DistSpec& dist, const Dataset& data);

// ---------------------------------------------------------------------------
// Monte-Carlo harness. Replication r draws its data with seed + r, and the
// per-replication values are reduced in replication order, so results do not
// depend on the worker count.

inline constexpr std::int64_t kMinReplications = 100;

struct McOptions {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct RiskEstimate {
  double mean_sq_error = 0.0;
  double std_error = 0.0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
};

/// Mean and standard error of a per-replication statistic.
struct McSummary {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
};

McSummary summarize(std::span<const double> values, std::uint64_t seed);

using Statistic = std::function<double(const Dataset&)>;

/// Per-replication values of `stat`, in replication order.
std::vector<double> mc_values(const Statistic& stat, const DistSpec& dist, Index n, std::int64_t reps,
                              std::uint64_t seed, const McOptions& opts = {});

McSummary mc_mean(const Statistic& stat, const DistSpec& dist, Index n, std::int64_t reps, std::uint64_t seed,
                  const McOptions& opts = {});

RiskEstimate mc_risk(const EstimatorSpec& est, const DistSpec& dist, Index n, std::int64_t reps,
                     std::uint64_t seed, const McOptions& opts = {});

/// Two estimators evaluated on the same replications. `difference` summarizes
/// the per-replication loss of `a` minus the loss of `b`.
struct PairedRisk {
  RiskEstimate a;
  RiskEstimate b;
  McSummary difference;
};

PairedRisk mc_compare(const EstimatorSpec& a, const EstimatorSpec& b, const DistSpec& dist, Index n,
                      std::int64_t reps, std::uint64_t seed, const McOptions& opts = {});

/// Population-optimal coefficient Delta / (Delta + ||C - f*||^2) for
/// configurations where both terms are analytic.
double oracle_alpha(const DistSpec& dist, const EstimatorSpec& est, Index n);

/// Least-squares slope of log(risk) against log(n).
double rate_slope(std::span<const std::pair<double, double>> points);

}  // namespace ushrink
