#pragma once

#include "effrank/regularizers.hpp"

#include <Eigen/Dense>

namespace effrank {

/// The quadratic loss (1/2T)||Y - Theta W||_F^2 in sufficient-statistic form.
///
/// W stacks the regressors [Z; P] (k + d*p rows, T columns) and Theta is the
/// p x (k + d*p) coefficient matrix [A, Phi_1, ..., Phi_d]. After construction
/// every evaluation costs O(p (k + dp)^2) regardless of T, which is what makes
/// the alternating solvers cheap inside rolling-window loops.
class BlockProblem {
 public:
  /// Y: p x T responses. Z: k x T lagged cointegrated regressors. P: (d p) x T
  /// lag stack. Either regressor block may have zero rows.
  BlockProblem(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z, const Eigen::MatrixXd& P);

  Eigen::Index num_targets() const noexcept { return C_.rows(); }
  Eigen::Index num_z() const noexcept { return k_; }
  Eigen::Index num_lags() const noexcept { return G_.rows() - k_; }
  Eigen::Index num_regressors() const noexcept { return G_.rows(); }
  double num_times() const noexcept { return T_; }

  const Eigen::MatrixXd& gram() const noexcept { return G_; }
  const Eigen::MatrixXd& cross() const noexcept { return C_; }

  /// (1/2T)||Y - Theta W||_F^2.
  double loss(const Eigen::MatrixXd& theta) const;

  /// Columns [col0, col0 + ncols) of the loss gradient Theta G - C.
  Eigen::MatrixXd gradient(const Eigen::MatrixXd& theta, Eigen::Index col0, Eigen::Index ncols) const;

  /// Largest eigenvalue of the diagonal Gram block, the block's Lipschitz constant.
  double block_lipschitz(Eigen::Index col0, Eigen::Index ncols) const;

 private:
  Eigen::MatrixXd G_;  // W W' / T
  Eigen::MatrixXd C_;  // Y W' / T
  double half_yy_ = 0.0;
  double T_ = 0.0;
  Eigen::Index k_ = 0;
};

enum class PenaltyKind { Nuclear, L1 };

struct BlockSolveResult {
  int iterations = 0;
  bool converged = false;
};

/// Proximal-gradient (ISTA) minimization over one column block of theta,
/// holding the other blocks fixed. The block is updated in place starting from
/// its current value, so every iterate has objective no larger than the start.
BlockSolveResult solve_block(const BlockProblem& problem, Eigen::MatrixXd& theta, Eigen::Index col0,
                             Eigen::Index ncols, PenaltyKind penalty, double lambda,
                             const ProxConfig& cfg);

/// Norm of the proximal-gradient mapping L * (X - prox(X - grad / L)) for a
/// block. Zero exactly at a block minimizer.
double block_optimality_residual(const BlockProblem& problem, const Eigen::MatrixXd& theta,
                                 Eigen::Index col0, Eigen::Index ncols, PenaltyKind penalty,
                                 double lambda);

}  // namespace effrank
