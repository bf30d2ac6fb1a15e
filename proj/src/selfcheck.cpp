#include "ushrink/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ushrink/covmat.hpp"

namespace ushrink::selfcheck {
namespace {

Dataset uniform_data(std::mt19937_64& rng, Index n, Index d, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  Dataset x(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < d; ++k) x(i, k) = u(rng);
  return x;
}

Index pick(std::mt19937_64& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

void record(SuiteResult& s, double a, double b) {
  const double e = relative_error(a, b);
  s.max_rel_error = std::max(s.max_rel_error, e);
  if (e <= s.tolerance) {
    ++s.passed;
  } else {
    ++s.failed;
  }
}

}  // namespace

double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

double brute_delta_general_covop(const GramMatrix& gram, const EnumerationOptions& opts) {
  const Dataset index_space(gram.size(), 0);
  return delta_general(covop_kappa_family(gram), index_space, 2, opts);
}

double brute_delta_degen_covop(const GramMatrix& gram, const EnumerationOptions& opts) {
  const Dataset index_space(gram.size(), 0);
  return delta_degen(covop_kappa_family(gram), index_space, 2, opts);
}

SuiteResult lemma_identities(std::uint64_t seed) {
  SuiteResult s{"lemma_identities", 0, 0, 0.0, 1e-9};
  std::mt19937_64 rng(seed);
  constexpr Index dims[] = {1, 2, 3, 5};
  for (int t = 0; t < 50; ++t) {
    const Index n = pick(rng, 2, 10);
    const Index d = dims[pick(rng, 0, 3)];
    for (const auto& [lhs, rhs] : lemma_b1_check(uniform_data(rng, n, d, 2.0))) record(s, lhs, rhs);
  }
  return s;
}

SuiteResult closed_form_vs_enumeration(std::uint64_t seed, const EnumerationOptions& opts) {
  SuiteResult s{"closed_form_vs_enumeration", 0, 0, 0.0, 1e-8};
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 20; ++t) {
    const Index n = pick(rng, 4, 8);
    const Index d = pick(rng, 1, 4);
    const Dataset x = uniform_data(rng, n, d, 2.0);
    const GramMatrix g = gram(LinearKernel{}, x);
    record(s, delta_general_closed(x), brute_delta_general_covop(g, opts));
    record(s, delta_degen_closed(x), brute_delta_degen_covop(g, opts));
  }
  return s;
}

SuiteResult generic_engine_cross_checks(std::uint64_t seed, const EnumerationOptions& opts) {
  SuiteResult s{"generic_engine_cross_checks", 0, 0, 0.0, 1e-9};
  std::mt19937_64 rng(seed);
  const KernelSpec kernels[] = {LinearKernel{}, GaussianKernel{1.0}, ExponentialKernel{1.0}};
  for (const KernelSpec& kernel : kernels) {
    for (int t = 0; t < 5; ++t) {
      const Index n = pick(rng, 4, 8);
      const Index d = pick(rng, 1, 3);
      const Dataset x = uniform_data(rng, n, d, 1.0);
      const GramMatrix g = gram(kernel, x);

      const KappaFamily mean_family = mean_kappa_family(g);
      const double mean_closed = shrink_mean(g, ZeroTarget{}).report.delta_hat;
      record(s, delta_general(mean_family, x, 1, opts), mean_closed);
      record(s, delta_degen(mean_family, x, 1, opts), mean_closed);

      const KappaFamily cov_family = covop_kappa_family(g);
      record(s, delta_general(cov_family, x, 2, opts), shrink_covop(g).delta_hat);
      record(s, delta_degen(cov_family, x, 2, opts), shrink_covop_degen(g).delta_hat);
    }
  }
  return s;
}

SuiteResult covmat_vs_covop(std::uint64_t seed) {
  SuiteResult s{"covmat_vs_covop", 0, 0, 0.0, 1e-9};
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 10; ++t) {
    const Index n = pick(rng, 4, 8);
    const Index d = pick(rng, 1, 4);
    const Dataset x = uniform_data(rng, n, d, 2.0);
    const ShrinkageReport op = shrink_covop(gram(LinearKernel{}, x));
    const ShrinkageReport mat = shrink_cov_matrix(x, 0.0, Variant::General).report;
    record(s, mat.delta_hat, op.delta_hat);
    record(s, mat.dist_sq, op.dist_sq);
    record(s, mat.alpha, op.alpha);
  }
  return s;
}

std::vector<SuiteResult> run_all(std::uint64_t seed, const EnumerationOptions& opts) {
  return {lemma_identities(seed), closed_form_vs_enumeration(seed + 1, opts), generic_engine_cross_checks(seed + 2, opts),
          covmat_vs_covop(seed + 3)};
}

}  // namespace ushrink::selfcheck
