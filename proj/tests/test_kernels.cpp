#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "ushrink/errors.hpp"
#include "ushrink/kernels.hpp"

using namespace ushrink;
using testing::rows;

TEST_CASE("eval_kernel examples") {
  const Point e1 = (Point(2) << 1, 0).finished();
  const Point e2 = (Point(2) << 0, 1).finished();
  CHECK(eval_kernel(LinearKernel{}, e1, e2) == 0.0);
  const Point x = (Point(3) << 0.3, -1.2, 4.0).finished();
  CHECK(eval_kernel(GaussianKernel{1.0}, x, x) == 1.0);
  CHECK(eval_kernel(ExponentialKernel{1.0}, e1, e1) == doctest::Approx(2.718281828).epsilon(1e-9));
}

TEST_CASE("eval_kernel parameterizations") {
  const Point x = (Point(2) << 1, 2).finished();
  const Point y = (Point(2) << -1, 0.5).finished();
  CHECK(eval_kernel(GaussianKernel{2.5}, x, y) == doctest::Approx(std::exp(-(4.0 + 2.25) / 2.5)));
  CHECK(eval_kernel(ExponentialKernel{3.0}, x, y) == doctest::Approx(std::exp(0.0 / 3.0)));
  CHECK(eval_kernel(LinearKernel{}, x, y) == doctest::Approx(0.0));
}

TEST_CASE("eval_kernel errors") {
  const Point a = Point::Ones(2);
  const Point b = Point::Ones(3);
  CHECK_THROWS_AS(eval_kernel(LinearKernel{}, a, b), InputError);
  CHECK_THROWS_AS(eval_kernel(GaussianKernel{1.0}, a, b), InputError);
  CHECK_THROWS_AS(eval_kernel(PrecomputedKernel{Matrix::Identity(2, 2)}, a, a), UnsupportedOperationError);
}

TEST_CASE("validate rejects bad parameters") {
  CHECK_THROWS_AS(validate(GaussianKernel{0.0}), ParameterError);
  CHECK_THROWS_AS(validate(GaussianKernel{-1.0}), ParameterError);
  CHECK_THROWS_AS(validate(ExponentialKernel{0.0}), ParameterError);
  CHECK_THROWS_AS(validate(PrecomputedKernel{Matrix::Ones(2, 3)}), InputError);
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(validate(PrecomputedKernel{asym}), InputError);
  Matrix nearly = Matrix::Identity(2, 2);
  nearly(0, 1) = 1e-12;
  CHECK_NOTHROW(validate(PrecomputedKernel{nearly}));
  CHECK_NOTHROW(validate(LinearKernel{}));
}

TEST_CASE("gram examples") {
  const GramMatrix g = gram(LinearKernel{}, rows({{1, 0}, {0, 1}}));
  CHECK(g.entries().isApprox(Matrix::Identity(2, 2)));
  const GramMatrix single = gram(GaussianKernel{1.0}, rows({{3.0, -2.0, 7.0}}));
  CHECK(single.size() == 1);
  CHECK(single(0, 0) == 1.0);
  const GramMatrix opp = gram(LinearKernel{}, rows({{1, 0}, {-1, 0}}));
  CHECK(opp(0, 0) == 1.0);
  CHECK(opp(0, 1) == -1.0);
  CHECK(opp(1, 0) == -1.0);
  CHECK(opp(1, 1) == 1.0);
}

TEST_CASE("gram of a precomputed kernel") {
  Matrix m(2, 2);
  m << 2, 1, 1, 3;
  const GramMatrix g = gram(PrecomputedKernel{m}, Dataset(2, 0));
  CHECK(g.entries() == m);
  CHECK_THROWS_AS(gram(PrecomputedKernel{m}, Dataset(3, 0)), InputError);
}

TEST_CASE("GramMatrix symmetrizes") {
  Matrix m(2, 2);
  m << 1, 2, 4, 1;
  const GramMatrix g(m);
  CHECK(g(0, 1) == 3.0);
  CHECK(g(1, 0) == 3.0);
  CHECK_THROWS_AS(GramMatrix(Matrix::Ones(2, 3)), InputError);
}

TEST_CASE("cross_gram matches pointwise evaluation") {
  std::mt19937_64 rng(3);
  const Dataset x = testing::uniform_data(rng, 4, 2, 1.0);
  const Dataset z = testing::uniform_data(rng, 3, 2, 1.0);
  const KernelSpec k = GaussianKernel{0.7};
  const Matrix c = cross_gram(k, x, z);
  REQUIRE(c.rows() == 4);
  REQUIRE(c.cols() == 3);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 3; ++j) CHECK(c(i, j) == eval_kernel(k, x.row(i), z.row(j)));
  }
  CHECK_THROWS_AS(cross_gram(k, x, testing::uniform_data(rng, 2, 3, 1.0)), InputError);
}

TEST_CASE("property: gram is exactly symmetric, PSD, nonnegative diagonal") {
  std::mt19937_64 rng(11);
  const KernelSpec kernels[] = {LinearKernel{}, GaussianKernel{1.0}, GaussianKernel{0.3}, ExponentialKernel{1.0},
                                ExponentialKernel{2.0}};
  for (int t = 0; t < 60; ++t) {
    const Index n = testing::pick(rng, 1, 8);
    const Index d = testing::pick(rng, 1, 4);
    const Dataset x = testing::uniform_data(rng, n, d, 1.5);
    for (const KernelSpec& k : kernels) {
      const GramMatrix g = gram(k, x);
      CHECK(g.entries() == g.entries().transpose());
      for (Index i = 0; i < n; ++i) CHECK(g(i, i) >= 0.0);
      const Eigen::SelfAdjointEigenSolver<Matrix> es(g.entries());
      const double largest = es.eigenvalues().maxCoeff();
      CHECK(es.eigenvalues().minCoeff() >= -1e-9 * std::max(largest, 1e-300));
    }
  }
}

TEST_CASE("property: eval_kernel symmetry") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const Index d = testing::pick(rng, 1, 6);
    const Dataset p = testing::uniform_data(rng, 2, d, 2.0);
    CHECK(eval_kernel(LinearKernel{}, p.row(0), p.row(1)) == eval_kernel(LinearKernel{}, p.row(1), p.row(0)));
    for (const KernelSpec& k : {KernelSpec{GaussianKernel{0.8}}, KernelSpec{ExponentialKernel{1.3}}}) {
      CHECK(std::abs(eval_kernel(k, p.row(0), p.row(1)) - eval_kernel(k, p.row(1), p.row(0))) <= 1e-12);
    }
  }
}
