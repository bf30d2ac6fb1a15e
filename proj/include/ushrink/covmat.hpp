#pragma once

#include <array>

#include "ushrink/shrinkage.hpp"
#include "ushrink/types.hpp"

namespace ushrink {

/// Linear-kernel specialization of the covariance-operator shrinkage: the
/// operator is the d x d covariance matrix and every Gram functional reduces
/// to three spectral summaries of the centered data.
///
/// Notation: Xt_i = X_i - mean(X), Sigma = (1/n) sum Xt_i Xt_i^T (divisor n),
/// C = n/(n-1) Sigma (the pairwise U-statistic).

struct SpectralSummaries {
  double sum_fourth = 0.0;  ///< sum_i ||Xt_i||^4
  double tr_s2 = 0.0;       ///< Tr[Sigma^2]
  double tr_sq = 0.0;       ///< Tr[Sigma]^2
  double tr_s = 0.0;        ///< Tr[Sigma]
};

SpectralSummaries spectral_summaries(const Dataset& data);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Direct sums over all index pairs, triples and quadruples versus their
/// closed forms in the spectral summaries:
///   [0] sum_{i,j}     <X_i - X_j, X_i - X_j>^2 = 2n S4 + 4n^2 Tr[S^2] + 2n^2 Tr^2[S]
///   [1] sum_{i,j,l}   <X_i - X_j, X_i - X_l>^2 = n^2 S4 + 3n^3 Tr[S^2]
///   [2] sum_{i,j,l,m} <X_i - X_j, X_l - X_m>^2 = 4n^4 Tr[S^2]
std::array<IdentityCheck, 3> lemma_b1_check(const Dataset& data);

/// Closed-form Delta_hat_general for the covariance matrix. Requires n >= 4.
double delta_general_closed(const Dataset& data);
double delta_general_closed(const SpectralSummaries& s, Index n);

/// Closed-form Delta_hat_degen for the covariance matrix. Requires n >= 4.
double delta_degen_closed(const Dataset& data);
double delta_degen_closed(const SpectralSummaries& s, Index n);

/// ||C - tau I||_F^2. Requires n >= 2 and tau >= 0.
double dist_sq_identity(const Dataset& data, double tau);

struct CovShrinkResult {
  Matrix sigma_hat;
  Matrix c_hat;
  Matrix shrunk;  ///< (1 - alpha) C + alpha tau I
  double tau = 1.0;
  ShrinkageReport report;
};

CovShrinkResult shrink_cov_matrix(const Dataset& data, double tau = 1.0, Variant variant = Variant::General);

}  // namespace ushrink
