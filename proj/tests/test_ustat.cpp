#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "ushrink/errors.hpp"
#include "ushrink/summation.hpp"
#include "ushrink/ustat.hpp"

using namespace ushrink;

namespace {

Dataset column(std::initializer_list<double> v) {
  Dataset x(static_cast<Index>(v.size()), 1);
  Index i = 0;
  for (double a : v) x(i++, 0) = a;
  return x;
}

EvalFn identity1() {
  return {1, true, [](const Dataset& x, std::span<const Index> t) { return x(t[0], 0); }};
}

EvalFn product2(bool symmetric = true) {
  return {2, symmetric, [](const Dataset& x, std::span<const Index> t) { return x(t[0], 0) * x(t[1], 0); }};
}

EvalFn constant(int order, double c) {
  return {order, true, [c](const Dataset&, std::span<const Index>) { return c; }};
}

// Product of all coordinates of every point in the tuple; symmetric of any order.
EvalFn sym_product(int order) {
  return {order, true, [](const Dataset& x, std::span<const Index> t) {
            double p = 1.0;
            for (Index i : t) p *= std::sin(x(i, 0)) + x.row(i).sum();
            return p;
          }};
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("u_stat_sym examples") {
  CHECK(u_stat_sym(identity1(), column({1, 2, 3}), 1) == doctest::Approx(2.0));
  CHECK(u_stat_sym(product2(), column({1, 2, 3}), 2) == doctest::Approx(11.0 / 3.0));
  for (int k = 1; k <= 4; ++k) CHECK(u_stat_sym(constant(k, 5.0), column({1, 2, 3, 4}), k) == doctest::Approx(5.0));
}

TEST_CASE("u_stat_perm examples") {
  const EvalFn asym{2, false, [](const Dataset& x, std::span<const Index> t) {
                      return x(t[0], 0) * x(t[0], 0) * x(t[1], 0);
                    }};
  CHECK(u_stat_perm(asym, column({1, 2}), 2) == doctest::Approx(3.0));
  CHECK(u_stat_perm(product2(), column({1, 2, 3}), 2) == doctest::Approx(11.0 / 3.0));
  CHECK(u_stat_perm(identity1(), column({4}), 1) == 4.0);
}

TEST_CASE("u_stat errors") {
  CHECK_THROWS_AS(u_stat_sym(product2(), column({1}), 2), InsufficientSampleError);
  CHECK_THROWS_AS(u_stat_perm(product2(), column({1}), 2), InsufficientSampleError);
  CHECK_THROWS_AS(u_stat_sym(product2(false), column({1, 2, 3}), 2), ContractError);
  CHECK_THROWS_AS(u_stat_sym(product2(), column({1, 2, 3}), 1), ContractError);

  EnumerationOptions tight;
  tight.limit = 5;
  CHECK_THROWS_AS(u_stat_perm(product2(), column({1, 2, 3}), 2, tight), ResourceError);
  try {
    u_stat_perm(product2(), column({1, 2, 3}), 2, tight);
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find('6') != std::string::npos);
  }
  tight.limit = 6;
  CHECK_NOTHROW(u_stat_perm(product2(), column({1, 2, 3}), 2, tight));
}

TEST_CASE("counting") {
  CHECK(count_permutations(5, 2) == 20);
  CHECK(count_permutations(5, 0) == 1);
  CHECK(count_permutations(3, 4) == 0);
  CHECK(count_combinations(5, 2) == 10);
  CHECK(count_combinations(52, 5) == 2598960);
  CHECK(count_combinations(3, 4) == 0);
  CHECK(count_combinations(1000, 500) == UINT64_MAX);
  CHECK(count_permutations(1000, 100) == UINT64_MAX);
}

TEST_CASE("comb_weights examples") {
  const CombWeights a = comb_weights(4, 2);
  REQUIRE(a.w.size() == 3);
  CHECK(a.w[0] == doctest::Approx(1.0 / 6.0));
  CHECK(a.w[1] == doctest::Approx(2.0 / 3.0));
  CHECK(a.w[2] == doctest::Approx(1.0 / 6.0));
  const CombWeights b = comb_weights(2, 1);
  CHECK(b.w[0] == doctest::Approx(0.5));
  CHECK(b.w[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(comb_weights(3, 2), InsufficientSampleError);
  CHECK_THROWS_AS(comb_weights(5, 0), ParameterError);
}

TEST_CASE("comb_weights large n stays finite") {
  const CombWeights w = comb_weights(1'000'000, 5);
  double s = 0.0;
  for (double v : w.w) {
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
    s += v;
  }
  CHECK(std::abs(s - 1.0) <= 1e-12);
  // Dominant mass sits at i = 0 for n >> k.
  CHECK(w.w[0] > 0.99);
}

TEST_CASE("property: comb_weights sum to one and match binomials") {
  for (int k = 1; k <= 5; ++k) {
    for (int n = 2 * k; n <= 200; ++n) {
      const CombWeights w = comb_weights(n, k);
      CompensatedSum s;
      for (int i = 0; i <= k; ++i) {
        CHECK(w.w[static_cast<std::size_t>(i)] >= 0.0);
        s += w.w[static_cast<std::size_t>(i)];
      }
      CHECK(std::abs(s.value() - 1.0) <= 1e-12);
      if (n <= 40) {
        for (int i = 0; i <= k; ++i) {
          const double expect = binom(k, i) * binom(n - k, k - i) / binom(n, k);
          CHECK(testing::rel(w.w[static_cast<std::size_t>(i)], expect) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("property: perm equals sym for symmetric functions") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    const Index n = testing::pick(rng, 1, 8);
    const int m = static_cast<int>(testing::pick(rng, 1, std::min<Index>(n, 4)));
    const Dataset x = testing::uniform_data(rng, n, 2, 1.0);
    const EvalFn g = sym_product(m);
    CHECK(testing::rel(u_stat_perm(g, x, m), u_stat_sym(g, x, m)) <= 1e-12);
  }
}

TEST_CASE("property: data permutation invariance") {
  std::mt19937_64 rng(22);
  const EvalFn asym{3, false, [](const Dataset& x, std::span<const Index> t) {
                      return x(t[0], 0) * x(t[1], 0) * x(t[1], 0) - x(t[2], 0);
                    }};
  for (int t = 0; t < 30; ++t) {
    const Index n = testing::pick(rng, 3, 8);
    const Dataset x = testing::uniform_data(rng, n, 1, 2.0);
    const Dataset y = testing::shuffled(rng, x);
    CHECK(testing::rel(u_stat_perm(asym, x, 3), u_stat_perm(asym, y, 3)) <= 1e-12);
    const EvalFn g = sym_product(2);
    CHECK(testing::rel(u_stat_sym(g, x, 2), u_stat_sym(g, y, 2)) <= 1e-12);
  }
}

TEST_CASE("property: u_stat_sym against a direct nested-loop oracle") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    const Index n = testing::pick(rng, 3, 8);
    const Dataset x = testing::uniform_data(rng, n, 1, 1.0);
    double s = 0.0;
    double count = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        for (Index l = j + 1; l < n; ++l) {
          s += x(i, 0) * x(j, 0) * x(l, 0);
          count += 1.0;
        }
      }
    }
    const EvalFn g{3, true, [](const Dataset& d, std::span<const Index> tp) {
                     return d(tp[0], 0) * d(tp[1], 0) * d(tp[2], 0);
                   }};
    CHECK(std::abs(u_stat_sym(g, x, 3) - s / count) <= 1e-12 * std::max(1.0, std::abs(s / count)));
  }
}

TEST_CASE("statistical: u_stat_sym of xy is unbiased for zero") {
  std::mt19937_64 rng(24);
  const int reps = 100'000;
  CompensatedSum sum;
  CompensatedSum sum_sq;
  for (int r = 0; r < reps; ++r) {
    const Dataset x = testing::normal_data(rng, 6, 1);
    const double u = u_stat_sym(product2(), x, 2);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum.value() / reps;
  const double var = (sum_sq.value() - reps * mean * mean) / (reps - 1);
  const double se = std::sqrt(var / reps);
  CHECK(std::abs(mean) <= 4.0 * se);
}

TEST_CASE("deterministic accumulation") {
  std::mt19937_64 rng(25);
  const Dataset x = testing::uniform_data(rng, 8, 1, 1.0);
  const EvalFn g = sym_product(3);
  CHECK(u_stat_perm(g, x, 3) == u_stat_perm(g, x, 3));
}
