#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ushrink/types.hpp"

namespace ushrink {

/// A real-valued function of `order` observations, evaluated on the dataset
/// rows selected by an index tuple. Hilbert-valued U-statistics are reduced to
/// real-valued ones by the caller, via inner products of the Hilbert kernel.
struct EvalFn {
  int order = 1;
  /// Declared by the caller: body is invariant under permutation of the tuple.
  bool symmetric = false;
  std::function<double(const Dataset& data, std::span<const Index> tuple)> body;
};

struct EnumerationOptions {
  /// Maximum number of tuples a single U-statistic may enumerate.
  std::uint64_t limit = 10'000'000;
};

/// Combination form: mean of g over all strictly increasing index tuples.
double u_stat_sym(const EvalFn& g, const Dataset& data, int k, const EnumerationOptions& opts = {});

/// Permutation form: mean of g over all ordered tuples of distinct indices.
/// Does not require g to be symmetric.
double u_stat_perm(const EvalFn& g, const Dataset& data, int m, const EnumerationOptions& opts = {});

/// nPm and nCk, saturating at UINT64_MAX.
std::uint64_t count_permutations(std::uint64_t n, std::uint64_t m) noexcept;
std::uint64_t count_combinations(std::uint64_t n, std::uint64_t k) noexcept;

/// Weights w[i] = kCi * (n-k)C(k-i) / nCk, i = 0..k, of the U-statistic
/// variance decomposition. They are a hypergeometric pmf, so they sum to one.
struct CombWeights {
  std::int64_t n = 0;
  int k = 0;
  std::vector<double> w;
};

CombWeights comb_weights(std::int64_t n, int k);

}  // namespace ushrink
