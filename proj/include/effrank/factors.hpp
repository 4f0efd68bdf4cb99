#pragma once

#include "effrank/panel.hpp"

#include <Eigen/Dense>

namespace effrank {

/// Principal-component estimate of the unit-root factor structure x_t = B f_t + e_t.
struct FactorFit {
  Eigen::MatrixXd B_hat;        // N x r, orthonormal columns
  Eigen::MatrixXd Bc_hat;       // N x (N - r), orthonormal complement
  int r_hat = 0;
  Eigen::VectorXd eigenvalues;  // N eigenvalues of XX', descending
  Eigen::MatrixXd F_hat;        // r x T factor paths B_hat' X

  Eigen::Index dimension() const noexcept { return B_hat.rows(); }
};

struct TrendDetectorConfig {
  int k_bar = 10;
  double delta0 = 0.3;

  void validate() const;
};

/// Loadings are the r leading eigenvectors of XX' (X = N x T data), the
/// complement the remaining N - r. Signs follow linalg::canonicalize_sign.
FactorFit estimate_loadings(const Panel& x, int r);

/// Sum over k = 1..k_bar of |rho(k)|, with rho the biased sample ACF
/// (denominator sum of squared deviations over the full series).
double acf_abs_sum(const Eigen::Ref<const Eigen::VectorXd>& series, int k_bar);

/// Number of leading principal components whose mean absolute ACF reaches
/// delta0. Scanning stops at the first component that falls short; a
/// constant component counts as stationary.
int detect_num_trends(const Panel& x, const TrendDetectorConfig& cfg);

/// estimate_loadings with r chosen by detect_num_trends, sharing one eigensolve.
FactorFit fit_factors(const Panel& x, const TrendDetectorConfig& cfg);

/// z_hat_t = Bc_hat' x_t for t = 1..T, as a T x (N - r) panel.
Panel cointegrated_series(const Panel& x, const FactorFit& fit);

/// ((1/(N T)) sum_t ||B f_t - B_hat f_hat_t||^2)^{1/2}.
double factor_recovery_rmse(const Eigen::MatrixXd& truth_B, const Eigen::MatrixXd& truth_F,
                            const FactorFit& fit);

}  // namespace effrank
