#pragma once

#include "effrank/regularizers.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace effrank {

/// Outer alternating-loop settings shared by the RRSRA and IRRA solvers.
struct SolverOptions {
  double outer_tol = 1e-6;  // relative Frobenius change of every block
  int max_outer = 500;
  ProxConfig prox{};
  double monotone_slack = 1e-8;

  void validate() const;
};

/// Reduced-rank and sparse fit: y_t ~ A z_{t-1} + Phi P_{t-1}.
struct RrsraFit {
  Eigen::MatrixXd A_hat;    // p x k
  Eigen::MatrixXd Phi_hat;  // p x (d p); zero columns when d = 0
  double lambda_A = 0.0;
  double lambda_Phi = 0.0;
  int d = 0;
  std::vector<double> objective_trace;  // objective after each outer iteration
  int iterations = 0;
  bool converged = false;

  /// Lag block i (1-based) of Phi_hat.
  Eigen::MatrixXd phi_block(int i) const;
};

struct EffectiveRankReport {
  int rank_A = 0;
  Eigen::VectorXd singular_values;  // of A_hat, descending
  std::vector<std::pair<int, int>> support_Phi;
  int cardinality = 0;
};

// All matrices below are series-major: Y is p x T, Z_lagged is k x T with
// column t-1 holding z_hat_{t-1} (z_hat_0 = 0), P is (d p) x T from lag_matrix.

double rrsra_objective(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z_lagged,
                       const Eigen::MatrixXd& P, const Eigen::MatrixXd& A,
                       const Eigen::MatrixXd& Phi, double lambda_A, double lambda_Phi);

/// Nuclear-norm proximal-gradient solve for A with Phi held fixed. `warm_start`
/// (if non-empty) seeds the iteration; otherwise it starts from zero.
Eigen::MatrixXd a_step(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z_lagged,
                       const Eigen::MatrixXd& P, const Eigen::MatrixXd& Phi_fixed,
                       double lambda_A, const ProxConfig& cfg,
                       const Eigen::MatrixXd& warm_start = Eigen::MatrixXd());

/// ISTA solve for Phi under the l1 penalty with A held fixed.
Eigen::MatrixXd phi_step(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z_lagged,
                         const Eigen::MatrixXd& P, const Eigen::MatrixXd& A_fixed,
                         double lambda_Phi, const ProxConfig& cfg,
                         const Eigen::MatrixXd& warm_start = Eigen::MatrixXd());

/// Alternating A-step / Phi-step from Phi = 0. d = 0 drops the autoregressive
/// block. Throws InternalError if the objective rises by more than the slack.
RrsraFit fit_rrsra(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z_lagged, int d,
                   double lambda_A, double lambda_Phi, const SolverOptions& opts = {});

EffectiveRankReport effective_rank(const RrsraFit& fit, double rel_tol = 1e-2);

/// Rows of R' Bc_hat', where A_hat = C R' is the rank-k0 SVD factorization with
/// unit-norm right singular vectors R. k0 comes from effective_rank(rel_tol).
Eigen::MatrixXd significant_cointegrating_vectors(const RrsraFit& fit,
                                                  const Eigen::MatrixXd& Bc_hat,
                                                  double rel_tol = 1e-2);

}  // namespace effrank
