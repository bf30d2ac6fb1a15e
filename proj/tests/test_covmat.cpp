#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "ushrink/covmat.hpp"
#include "ushrink/errors.hpp"
#include "ushrink/selfcheck.hpp"

using namespace ushrink;
using testing::rel;
using testing::rows;

namespace {

// ||C - tau I||_F^2 straight from the matrices.
double direct_dist(const Dataset& x, double tau) {
  const double n = static_cast<double>(x.rows());
  const Dataset xt = x.rowwise() - x.colwise().mean();
  const Matrix c = Matrix(xt.transpose() * xt) / (n - 1.0);
  return (c - tau * Matrix::Identity(x.cols(), x.cols())).squaredNorm();
}

}  // namespace

TEST_CASE("spectral_summaries examples") {
  const SpectralSummaries s = spectral_summaries(rows({{1, 0}, {-1, 0}}));
  CHECK(s.sum_fourth == doctest::Approx(2.0));
  CHECK(s.tr_s2 == doctest::Approx(1.0));
  CHECK(s.tr_sq == doctest::Approx(1.0));
  CHECK(s.tr_s == doctest::Approx(1.0));

  const SpectralSummaries z = spectral_summaries(rows({{3, 4}, {3, 4}, {3, 4}}));
  CHECK(z.sum_fourth == 0.0);
  CHECK(z.tr_s2 == 0.0);
  CHECK(z.tr_sq == 0.0);

  std::mt19937_64 rng(41);
  const Dataset x = testing::uniform_data(rng, 6, 3, 1.0);
  const SpectralSummaries a = spectral_summaries(x);
  const SpectralSummaries b = spectral_summaries(2.5 * x);
  const double s4 = std::pow(2.5, 4);
  CHECK(rel(b.sum_fourth, s4 * a.sum_fourth) <= 1e-12);
  CHECK(rel(b.tr_s2, s4 * a.tr_s2) <= 1e-12);
  CHECK(rel(b.tr_sq, s4 * a.tr_sq) <= 1e-12);

  CHECK_THROWS_AS(spectral_summaries(rows({{1, 2}})), InsufficientSampleError);
}

TEST_CASE("lemma_b1_check examples") {
  const auto c = lemma_b1_check(rows({{1, 0}, {-1, 0}}));
  CHECK(c[0].lhs == doctest::Approx(32.0));
  CHECK(c[0].rhs == doctest::Approx(32.0));
  CHECK(c[2].lhs == doctest::Approx(64.0));
  CHECK(c[2].rhs == doctest::Approx(64.0));
  CHECK(c[1].lhs == doctest::Approx(c[1].rhs));

  for (const IdentityCheck& z : lemma_b1_check(rows({{1, 1}, {1, 1}, {1, 1}}))) {
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
  }
  CHECK_THROWS_AS(lemma_b1_check(rows({{1, 2}})), InsufficientSampleError);
}

TEST_CASE("property: lemma identities on random data") {
  const selfcheck::SuiteResult s = selfcheck::lemma_identities(101);
  CHECK(s.passed == 150);
  CHECK(s.failed == 0);
  CHECK(s.max_rel_error <= 1e-9);
}

TEST_CASE("closed forms against enumeration") {
  std::mt19937_64 rng(42);
  const Dataset x = testing::uniform_data(rng, 6, 3, 1.0);
  const GramMatrix g = gram(LinearKernel{}, x);
  CHECK(rel(delta_general_closed(x), selfcheck::brute_delta_general_covop(g)) <= 1e-8);
  CHECK(rel(delta_degen_closed(x), selfcheck::brute_delta_degen_covop(g)) <= 1e-8);

  const selfcheck::SuiteResult s = selfcheck::closed_form_vs_enumeration(102);
  CHECK(s.ok());
  CHECK(s.max_rel_error <= 1e-8);
}

TEST_CASE("closed forms: degenerate data, homogeneity, small n") {
  const Dataset same = rows({{1, 2}, {1, 2}, {1, 2}, {1, 2}});
  CHECK(delta_general_closed(same) == 0.0);
  CHECK(delta_degen_closed(same) == 0.0);

  std::mt19937_64 rng(43);
  const Dataset x = testing::uniform_data(rng, 7, 2, 1.0);
  CHECK(rel(delta_general_closed(3.0 * x), 81.0 * delta_general_closed(x)) <= 1e-12);
  CHECK(rel(delta_degen_closed(3.0 * x), 81.0 * delta_degen_closed(x)) <= 1e-12);

  const Dataset small = rows({{1, 0}, {0, 1}, {2, 2}});
  CHECK_THROWS_AS(delta_general_closed(small), InsufficientSampleError);
  CHECK_THROWS_AS(delta_degen_closed(small), InsufficientSampleError);
}

TEST_CASE("dist_sq_identity examples") {
  const Dataset x = rows({{1, 0}, {-1, 0}});
  CHECK(dist_sq_identity(x, 1.0) == doctest::Approx(2.0));

  std::mt19937_64 rng(44);
  const Dataset y = testing::uniform_data(rng, 6, 3, 1.0);
  const SpectralSummaries s = spectral_summaries(y);
  CHECK(rel(dist_sq_identity(y, 0.0), 36.0 / 25.0 * s.tr_s2) <= 1e-12);
  CHECK(rel(dist_sq_identity(y, 0.0), direct_dist(y, 0.0)) <= 1e-12);
  CHECK(rel(dist_sq_identity(y, 1.7), direct_dist(y, 1.7)) <= 1e-12);

  // Points +-sqrt(d) e_k make C exactly the identity.
  Dataset eye(4, 2);
  eye << 1, 0, -1, 0, 0, 1, 0, -1;
  eye *= std::sqrt(1.5);
  CHECK(std::abs(dist_sq_identity(eye, 1.0)) <= 1e-12);

  CHECK_THROWS_AS(dist_sq_identity(x, -1.0), ParameterError);
  CHECK_THROWS_AS(dist_sq_identity(rows({{1, 1}}), 1.0), InsufficientSampleError);
}

TEST_CASE("shrink_cov_matrix examples") {
  const Dataset same = rows({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  const CovShrinkResult a = shrink_cov_matrix(same, 1.0);
  CHECK(a.c_hat.isZero());
  CHECK(a.report.delta_hat == 0.0);
  CHECK(a.report.dist_sq == doctest::Approx(3.0));
  CHECK(a.report.alpha == 0.0);
  CHECK(a.shrunk.isZero());

  std::mt19937_64 rng(45);
  const Dataset x = testing::normal_data(rng, 6, 3);
  const CovShrinkResult b = shrink_cov_matrix(x, 1.0, Variant::General);
  const double alpha = b.report.alpha;
  const Matrix expect = (1.0 - alpha) * b.c_hat + alpha * Matrix::Identity(3, 3);
  CHECK((b.shrunk - expect).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(b.c_hat == Matrix((6.0 / 5.0) * b.sigma_hat));
  CHECK((b.shrunk - b.shrunk.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((b.sigma_hat - b.sigma_hat.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(b.tau == 1.0);

  const Dataset y = testing::normal_data(rng, 8, 2);
  const ShrinkageReport m = shrink_cov_matrix(y, 0.0).report;
  const ShrinkageReport o = shrink_covop(gram(LinearKernel{}, y));
  CHECK(rel(m.delta_hat, o.delta_hat) <= 1e-9);
  CHECK(rel(m.dist_sq, o.dist_sq) <= 1e-9);
  CHECK(rel(m.alpha, o.alpha) <= 1e-9);

  const CovShrinkResult d = shrink_cov_matrix(y, 1.0, Variant::Degenerate);
  CHECK(d.report.variant == Variant::Degenerate);
  CHECK(rel(d.report.delta_hat, delta_degen_closed(y)) <= 1e-12);

  try {
    shrink_cov_matrix(rows({{1}, {2}, {3}}));
    FAIL("expected an insufficient-sample error");
  } catch (const InsufficientSampleError& e) {
    CHECK(std::string(e.what()).find("n >= 4") != std::string::npos);
  }
  CHECK_THROWS_AS(shrink_cov_matrix(y, -0.5), ParameterError);
}

TEST_CASE("covmat agrees with covop on random datasets") {
  const selfcheck::SuiteResult s = selfcheck::covmat_vs_covop(103);
  CHECK(s.ok());
  CHECK(s.passed == 30);
}

TEST_CASE("property: translation invariance") {
  std::mt19937_64 rng(46);
  for (int t = 0; t < 20; ++t) {
    const Index n = testing::pick(rng, 4, 10);
    const Index d = testing::pick(rng, 1, 4);
    const Dataset x = testing::uniform_data(rng, n, d, 1.0);
    const Eigen::RowVectorXd shift = testing::uniform_data(rng, 1, d, 5.0).row(0);
    const Dataset y = x.rowwise() + shift;
    CHECK(rel(delta_general_closed(x), delta_general_closed(y)) <= 1e-10);
    CHECK(rel(delta_degen_closed(x), delta_degen_closed(y)) <= 1e-10);
    CHECK(rel(dist_sq_identity(x, 1.0), dist_sq_identity(y, 1.0)) <= 1e-10);
    CHECK(rel(shrink_cov_matrix(x).report.alpha, shrink_cov_matrix(y).report.alpha) <= 1e-10);
  }
}

TEST_CASE("property: rotation invariance") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 20; ++t) {
    const Index n = testing::pick(rng, 4, 10);
    const Index d = testing::pick(rng, 2, 5);
    const Dataset x = testing::uniform_data(rng, n, d, 1.0);
    const Matrix q = testing::random_rotation(rng, d);
    const Dataset y = x * q.transpose();
    CHECK(rel(delta_general_closed(x), delta_general_closed(y)) <= 1e-10);
    CHECK(rel(delta_degen_closed(x), delta_degen_closed(y)) <= 1e-10);
    CHECK(rel(dist_sq_identity(x, 0.0), dist_sq_identity(y, 0.0)) <= 1e-10);
    CHECK(rel(dist_sq_identity(x, 1.0), dist_sq_identity(y, 1.0)) <= 1e-10);
  }
}
