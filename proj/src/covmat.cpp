#include "ushrink/covmat.hpp"

#include <cmath>
#include <string>

#include "ushrink/errors.hpp"
#include "ushrink/summation.hpp"

namespace ushrink {
namespace {

void require_n(Index n, Index min_n, const char* what) {
  if (n < min_n) {
    throw InsufficientSampleError(std::string(what) + ": need n >= " + std::to_string(min_n) +
                                  ", got n=" + std::to_string(n));
  }
}

Dataset centered(const Dataset& data) {
  const Point mean = data.colwise().mean();
  Dataset out = data;
  out.rowwise() -= mean;
  return out;
}

Matrix sample_sigma(const Dataset& xt) {
  const Matrix s = (xt.transpose() * xt) / static_cast<double>(xt.rows());
  return 0.5 * (s + s.transpose());
}

}  // namespace

SpectralSummaries spectral_summaries(const Dataset& data) {
  require_n(data.rows(), 2, "spectral_summaries");
  const Dataset xt = centered(data);
  const Matrix sigma = sample_sigma(xt);
  CompensatedSum fourth;
  for (Index i = 0; i < xt.rows(); ++i) {
    const double sq = xt.row(i).squaredNorm();
    fourth += sq * sq;
  }
  const double tr = sigma.trace();
  // Tr[S^2] = ||S||_F^2 for symmetric S.
  return SpectralSummaries{fourth.value(), sigma.squaredNorm(), tr * tr, tr};
}

std::array<IdentityCheck, 3> lemma_b1_check(const Dataset& data) {
  const Index n = data.rows();
  require_n(n, 2, "lemma_b1_check");
  const SpectralSummaries s = spectral_summaries(data);
  const double nd = static_cast<double>(n);

  CompensatedSum pairs;
  CompensatedSum triples;
  CompensatedSum quads;
  Point dij;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      dij = data.row(i) - data.row(j);
      const double p = dij.dot(dij);
      pairs += p * p;
      for (Index l = 0; l < n; ++l) {
        const double t = dij.dot(data.row(i) - data.row(l));
        triples += t * t;
        for (Index m = 0; m < n; ++m) {
          const double q = dij.dot(data.row(l) - data.row(m));
          quads += q * q;
        }
      }
    }
  }

  std::array<IdentityCheck, 3> out;
  out[0] = {pairs.value(), 2.0 * nd * s.sum_fourth + 4.0 * nd * nd * s.tr_s2 + 2.0 * nd * nd * s.tr_sq};
  out[1] = {triples.value(), nd * nd * s.sum_fourth + 3.0 * nd * nd * nd * s.tr_s2};
  out[2] = {quads.value(), 4.0 * nd * nd * nd * nd * s.tr_s2};
  return out;
}

double delta_general_closed(const SpectralSummaries& s, Index n) {
  require_n(n, 4, "delta_general_closed");
  const double nd = static_cast<double>(n);
  return s.sum_fourth / ((nd - 2.0) * (nd - 3.0)) -
         nd * (nd + 1.0) / ((nd - 1.0) * (nd - 1.0) * (nd - 3.0)) * s.tr_s2 -
         nd / ((nd - 1.0) * (nd - 2.0) * (nd - 3.0)) * s.tr_sq;
}

double delta_general_closed(const Dataset& data) {
  require_n(data.rows(), 4, "delta_general_closed");
  return delta_general_closed(spectral_summaries(data), data.rows());
}

double delta_degen_closed(const SpectralSummaries& s, Index n) {
  require_n(n, 4, "delta_degen_closed");
  const double nd = static_cast<double>(n);
  const double nc2 = nd * (nd - 1.0) / 2.0;
  const double np4 = nd * (nd - 1.0) * (nd - 2.0) * (nd - 3.0);
  const double base = nc2 * np4;
  return nd * (nd * nd - 3.0 * nd + 4.0) / (2.0 * base) * s.sum_fourth -
         2.0 * nd * nd * (nd - 2.0) / base * s.tr_s2 +
         nd * nd * (nd * nd - 5.0 * nd + 4.0) / (2.0 * base) * s.tr_sq;
}

double delta_degen_closed(const Dataset& data) {
  require_n(data.rows(), 4, "delta_degen_closed");
  return delta_degen_closed(spectral_summaries(data), data.rows());
}

double dist_sq_identity(const Dataset& data, double tau) {
  require_n(data.rows(), 2, "dist_sq_identity");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ParameterError("dist_sq_identity: tau must be finite and >= 0");
  const SpectralSummaries s = spectral_summaries(data);
  const double nd = static_cast<double>(data.rows());
  const double d = static_cast<double>(data.cols());
  const double r = nd / (nd - 1.0);
  const double quad = r * r * s.tr_s2;
  const double lin = 2.0 * r * tau * s.tr_s;
  const double cst = tau * tau * d;
  const double value = quad - lin + cst;
  // Cancellation when C is close to tau I.
  const double scale = quad + std::abs(lin) + cst;
  if (value < 0.0 && value > -1e-12 * scale) return 0.0;
  return value;
}

CovShrinkResult shrink_cov_matrix(const Dataset& data, double tau, Variant variant) {
  const Index n = data.rows();
  require_n(n, 4, "shrink_cov_matrix");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ParameterError("shrink_cov_matrix: tau must be finite and >= 0");
  const SpectralSummaries s = spectral_summaries(data);
  const double delta =
      variant == Variant::General ? delta_general_closed(s, n) : delta_degen_closed(s, n);

  CovShrinkResult out;
  out.tau = tau;
  out.sigma_hat = sample_sigma(centered(data));
  out.c_hat = (static_cast<double>(n) / static_cast<double>(n - 1)) * out.sigma_hat;
  out.report = make_report(delta, dist_sq_identity(data, tau), variant);
  const double a = out.report.alpha;
  const Index d = data.cols();
  out.shrunk = (1.0 - a) * out.c_hat + a * tau * Matrix::Identity(d, d);
  return out;
}

}  // namespace ushrink
