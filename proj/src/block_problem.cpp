#include "effrank/block_problem.hpp"

#include "effrank/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace effrank {

namespace {

Eigen::MatrixXd apply_prox(const Eigen::MatrixXd& m, PenaltyKind penalty, double threshold) {
  return penalty == PenaltyKind::Nuclear ? svt(m, threshold) : soft_threshold(m, threshold);
}

}  // namespace

BlockProblem::BlockProblem(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z,
                           const Eigen::MatrixXd& P)
    : k_(Z.rows()) {
  const Eigen::Index T = Y.cols();
  if (T < 1) throw InvalidArgument("regression needs at least one time point");
  if ((Z.rows() > 0 && Z.cols() != T) || (P.rows() > 0 && P.cols() != T))
    throw InvalidArgument("regressors and responses must share the time dimension");
  T_ = static_cast<double>(T);

  Eigen::MatrixXd W(Z.rows() + P.rows(), T);
  if (Z.rows() > 0) W.topRows(Z.rows()) = Z;
  if (P.rows() > 0) W.bottomRows(P.rows()) = P;
  G_ = Eigen::MatrixXd(W.rows(), W.rows());
  G_.setZero();
  G_.selfadjointView<Eigen::Lower>().rankUpdate(W, 1.0 / T_);
  G_ = G_.selfadjointView<Eigen::Lower>();
  C_ = Y * W.transpose() / T_;
  half_yy_ = 0.5 * Y.squaredNorm() / T_;
}

double BlockProblem::loss(const Eigen::MatrixXd& theta) const {
  const double linear = theta.cwiseProduct(C_).sum();
  const double quadratic = 0.5 * (theta * G_).cwiseProduct(theta).sum();
  // Clamp roundoff: the loss is a sum of squares.
  return std::max(0.0, half_yy_ - linear + quadratic);
}

Eigen::MatrixXd BlockProblem::gradient(const Eigen::MatrixXd& theta, Eigen::Index col0,
                                       Eigen::Index ncols) const {
  return theta * G_.middleCols(col0, ncols) - C_.middleCols(col0, ncols);
}

double BlockProblem::block_lipschitz(Eigen::Index col0, Eigen::Index ncols) const {
  if (ncols == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G_.block(col0, col0, ncols, ncols),
                                                      Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

BlockSolveResult solve_block(const BlockProblem& problem, Eigen::MatrixXd& theta,
                             Eigen::Index col0, Eigen::Index ncols, PenaltyKind penalty,
                             double lambda, const ProxConfig& cfg) {
  BlockSolveResult result;
  if (ncols == 0) {
    result.converged = true;
    return result;
  }
  const double lipschitz = problem.block_lipschitz(col0, ncols);
  if (!(lipschitz > 0.0)) {
    // The block's regressors are identically zero: the loss ignores it and the
    // penalty pins it at zero.
    theta.middleCols(col0, ncols).setZero();
    result.converged = true;
    return result;
  }
  const double step = cfg.step_scale / lipschitz;

  // Gradient of the block = X G_bb + offset, with offset fixed by the other blocks.
  const Eigen::MatrixXd G_bb = problem.gram().block(col0, col0, ncols, ncols);
  Eigen::MatrixXd X = theta.middleCols(col0, ncols);
  const Eigen::MatrixXd offset = problem.gradient(theta, col0, ncols) - X * G_bb;

  for (int it = 1; it <= cfg.max_inner_iter; ++it) {
    const Eigen::MatrixXd next = apply_prox(X - step * (X * G_bb + offset), penalty, step * lambda);
    if (!next.allFinite()) throw NumericalFailure("non-finite iterate in proximal-gradient step");
    const double change = (next - X).norm();
    const double scale = next.norm();
    X = next;
    result.iterations = it;
    if (change <= cfg.inner_tol * scale || change == 0.0) {
      result.converged = true;
      break;
    }
  }
  theta.middleCols(col0, ncols) = X;
  return result;
}

double block_optimality_residual(const BlockProblem& problem, const Eigen::MatrixXd& theta,
                                 Eigen::Index col0, Eigen::Index ncols, PenaltyKind penalty,
                                 double lambda) {
  if (ncols == 0) return 0.0;
  const double lipschitz = problem.block_lipschitz(col0, ncols);
  if (!(lipschitz > 0.0)) return theta.middleCols(col0, ncols).norm();
  const Eigen::MatrixXd X = theta.middleCols(col0, ncols);
  const Eigen::MatrixXd grad = problem.gradient(theta, col0, ncols);
  const Eigen::MatrixXd mapped = apply_prox(X - grad / lipschitz, penalty, lambda / lipschitz);
  return lipschitz * (X - mapped).norm();
}

}  // namespace effrank
