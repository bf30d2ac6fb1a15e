#include "ushrink/ustat.hpp"

#include <limits>
#include <string>

#include "ushrink/errors.hpp"
#include "ushrink/summation.hpp"

namespace ushrink {
namespace {

constexpr auto kSaturated = std::numeric_limits<std::uint64_t>::max();

void check_order(const EvalFn& g, const Dataset& data, int order, const char* what) {
  if (!g.body) throw ContractError(std::string(what) + ": evaluation function has no body");
  if (order < 1) throw ParameterError(std::string(what) + ": order must be at least 1");
  if (g.order != order) {
    throw ContractError(std::string(what) + ": evaluation function has order " + std::to_string(g.order) +
                        " but order " + std::to_string(order) + " was requested");
  }
  if (data.rows() < order) {
    throw InsufficientSampleError(std::string(what) + ": need n >= " + std::to_string(order) + ", got n=" +
                                  std::to_string(data.rows()));
  }
}

void check_limit(std::uint64_t count, const EnumerationOptions& opts, const char* what) {
  if (count > opts.limit) {
    const std::string required = count == kSaturated ? "more than 2^64-1" : std::to_string(count);
    throw ResourceError(std::string(what) + ": enumeration requires " + required +
                        " tuples, limit is " + std::to_string(opts.limit));
  }
}

// Ordered injective tuples in lexicographic order.
void enumerate_perm(const EvalFn& g, const Dataset& data, std::vector<Index>& tuple, std::vector<char>& used,
                    std::size_t depth, CompensatedSum& acc) {
  const Index n = data.rows();
  if (depth == tuple.size()) {
    acc += g.body(data, tuple);
    return;
  }
  for (Index i = 0; i < n; ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    used[static_cast<std::size_t>(i)] = 1;
    tuple[depth] = i;
    enumerate_perm(g, data, tuple, used, depth + 1, acc);
    used[static_cast<std::size_t>(i)] = 0;
  }
}

}  // namespace

std::uint64_t count_permutations(std::uint64_t n, std::uint64_t m) noexcept {
  if (m > n) return 0;
  std::uint64_t out = 1;
  for (std::uint64_t t = 0; t < m; ++t) {
    const std::uint64_t f = n - t;
    if (out > kSaturated / f) return kSaturated;
    out *= f;
  }
  return out;
}

std::uint64_t count_combinations(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  // out * (n - k + t) / t stays integral at every step.
  __extension__ using Wide = unsigned __int128;
  Wide out = 1;
  for (std::uint64_t t = 1; t <= k; ++t) {
    out = out * (n - k + t) / t;
    if (out > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(out);
}

double u_stat_sym(const EvalFn& g, const Dataset& data, int k, const EnumerationOptions& opts) {
  check_order(g, data, k, "u_stat_sym");
  if (!g.symmetric) {
    throw ContractError("u_stat_sym: evaluation function is not declared symmetric; use u_stat_perm");
  }
  const auto n = static_cast<std::uint64_t>(data.rows());
  const std::uint64_t count = count_combinations(n, static_cast<std::uint64_t>(k));
  check_limit(count, opts, "u_stat_sym");

  // Strictly increasing tuples, lexicographic.
  std::vector<Index> tuple(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) tuple[static_cast<std::size_t>(i)] = i;
  const Index rows = data.rows();
  CompensatedSum acc;
  while (true) {
    acc += g.body(data, tuple);
    int pos = k - 1;
    while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == rows - k + pos) --pos;
    if (pos < 0) break;
    ++tuple[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < k; ++j) {
      tuple[static_cast<std::size_t>(j)] = tuple[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return acc.value() / static_cast<double>(count);
}

double u_stat_perm(const EvalFn& g, const Dataset& data, int m, const EnumerationOptions& opts) {
  check_order(g, data, m, "u_stat_perm");
  const auto n = static_cast<std::uint64_t>(data.rows());
  const std::uint64_t count = count_permutations(n, static_cast<std::uint64_t>(m));
  check_limit(count, opts, "u_stat_perm");

  std::vector<Index> tuple(static_cast<std::size_t>(m));
  std::vector<char> used(static_cast<std::size_t>(data.rows()), 0);
  CompensatedSum acc;
  enumerate_perm(g, data, tuple, used, 0, acc);
  return acc.value() / static_cast<double>(count);
}

CombWeights comb_weights(std::int64_t n, int k) {
  if (k < 1) throw ParameterError("comb_weights: need k >= 1, got k=" + std::to_string(k));
  if (n < 2 * static_cast<std::int64_t>(k)) {
    throw InsufficientSampleError("comb_weights: need n >= 2k, got n=" + std::to_string(n) +
                                  ", k=" + std::to_string(k));
  }
  // w[0] = (n-k)Ck / nCk, then the ratio
  // w[i+1] / w[i] = ((k-i) / (i+1)) * ((k-i) / (n-2k+i+1)).
  CombWeights out{n, k, std::vector<double>(static_cast<std::size_t>(k) + 1)};
  const auto nl = static_cast<long double>(n);
  const auto kl = static_cast<long double>(k);
  long double w = 1.0L;
  for (int t = 0; t < k; ++t) w *= (nl - kl - t) / (nl - t);
  out.w[0] = static_cast<double>(w);
  for (int i = 0; i < k; ++i) {
    const long double ki = kl - i;
    w *= (ki / (i + 1)) * (ki / (nl - 2 * kl + i + 1));
    out.w[static_cast<std::size_t>(i) + 1] = static_cast<double>(w);
  }
  return out;
}

}  // namespace ushrink
