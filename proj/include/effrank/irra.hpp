#pragma once

#include "effrank/rrsra.hpp"

#include <Eigen/Dense>

#include <vector>

namespace effrank {

/// How the Phi_i blocks see each other within one outer sweep.
enum class BlockUpdate {
  GaussSeidel,  // each Phi_i uses the freshest Phi_j (default)
  Jacobi        // each Phi_i uses the previous sweep's Phi_j, j != i
};

/// Integrative reduced-rank fit: nuclear penalties on A and on every lag block.
struct IrraFit {
  Eigen::MatrixXd A_hat;                // p x k
  std::vector<Eigen::MatrixXd> Phi_hats;  // d blocks, each p x p
  double lambda_A = 0.0;
  double lambda_Phi = 0.0;
  std::vector<double> weights;          // lambda_i = lambda_Phi * weights[i]
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  BlockUpdate update = BlockUpdate::GaussSeidel;

  int d() const noexcept { return static_cast<int>(Phi_hats.size()); }
  /// [Phi_1, ..., Phi_d] as one p x (d p) matrix.
  Eigen::MatrixXd stacked_phi() const;
};

/// d copies of sigma_1(Y) (sqrt(p) + sqrt(rank Y)) / T.
std::vector<double> default_weights(const Eigen::MatrixXd& Y, int d);

/// P is the (d p) x T lag stack; Phis the d lag blocks.
double irra_objective(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z_lagged,
                      const Eigen::MatrixXd& P, const Eigen::MatrixXd& A,
                      const std::vector<Eigen::MatrixXd>& Phis, double lambda_A,
                      double lambda_Phi, const std::vector<double>& weights);

/// Block-coordinate descent: A first, then Phi_1..Phi_d, each block solved to
/// convergence by proximal gradient. The monotonicity sentinel is only armed
/// for Gauss-Seidel updates; Jacobi sweeps carry no descent guarantee.
IrraFit fit_irra(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z_lagged, int d,
                 double lambda_A, double lambda_Phi, const std::vector<double>& weights,
                 const SolverOptions& opts = {}, BlockUpdate update = BlockUpdate::GaussSeidel);

/// Numerical rank of each Phi_hat block (singular values above rel_tol * sigma_max).
std::vector<int> phi_block_ranks(const IrraFit& fit, double rel_tol = 1e-2);

/// A_hat's effective rank, with the support fields describing the stacked Phi.
EffectiveRankReport effective_rank(const IrraFit& fit, double rel_tol = 1e-2);

}  // namespace effrank
