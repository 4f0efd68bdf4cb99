#include "effrank/rrsra.hpp"

#include "effrank/block_problem.hpp"
#include "effrank/error.hpp"
#include "effrank/linalg.hpp"
#include "effrank/panel.hpp"
#include "solver_common.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace effrank {

void SolverOptions::validate() const {
  if (!(outer_tol > 0.0)) throw InvalidArgument("outer_tol must be positive");
  if (max_outer < 1) throw InvalidArgument("max_outer must be positive");
  if (!(monotone_slack >= 0.0)) throw InvalidArgument("monotone_slack must be nonnegative");
  prox.validate();
}

Eigen::MatrixXd RrsraFit::phi_block(int i) const {
  if (i < 1 || i > d) throw InvalidArgument("lag block index out of range");
  const Eigen::Index p = Phi_hat.rows();
  return Phi_hat.middleCols((i - 1) * p, p);
}

namespace {

void check_shapes(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z, const Eigen::MatrixXd& P,
                  const Eigen::MatrixXd& A, const Eigen::MatrixXd& Phi) {
  const Eigen::Index p = Y.rows();
  const Eigen::Index T = Y.cols();
  if (T < 1) throw InvalidArgument("need at least one time point");
  if (Z.cols() != T || P.cols() != T) throw InvalidArgument("time dimension mismatch");
  if (A.rows() != p || A.cols() != Z.rows())
    throw InvalidArgument("A must be " + std::to_string(p) + " x " + std::to_string(Z.rows()));
  if (Phi.rows() != p || Phi.cols() != P.rows())
    throw InvalidArgument("Phi must be " + std::to_string(p) + " x " + std::to_string(P.rows()));
}

Eigen::MatrixXd seed_block(const Eigen::MatrixXd& warm, Eigen::Index rows, Eigen::Index cols) {
  if (warm.size() == 0) return Eigen::MatrixXd::Zero(rows, cols);
  if (warm.rows() != rows || warm.cols() != cols) throw InvalidArgument("warm start has wrong shape");
  return warm;
}

}  // namespace

double rrsra_objective(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z, const Eigen::MatrixXd& P,
                       const Eigen::MatrixXd& A, const Eigen::MatrixXd& Phi, double lambda_A,
                       double lambda_Phi) {
  check_shapes(Y, Z, P, A, Phi);
  Eigen::MatrixXd resid = Y;
  if (A.size()) resid -= A * Z;
  if (Phi.size()) resid -= Phi * P;
  const double T = static_cast<double>(Y.cols());
  return resid.squaredNorm() / (2.0 * T) + lambda_A * nuclear_norm(A) +
         lambda_Phi * Phi.cwiseAbs().sum();
}

Eigen::MatrixXd a_step(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z, const Eigen::MatrixXd& P,
                       const Eigen::MatrixXd& Phi_fixed, double lambda_A, const ProxConfig& cfg,
                       const Eigen::MatrixXd& warm_start) {
  if (lambda_A < 0.0) throw InvalidArgument("lambda_A must be nonnegative");
  cfg.validate();
  const Eigen::Index p = Y.rows();
  const Eigen::MatrixXd A0 = seed_block(warm_start, p, Z.rows());
  check_shapes(Y, Z, P, A0, Phi_fixed);
  const BlockProblem problem(Y, Z, P);
  Eigen::MatrixXd theta(p, problem.num_regressors());
  theta.leftCols(Z.rows()) = A0;
  theta.rightCols(P.rows()) = Phi_fixed;
  solve_block(problem, theta, 0, Z.rows(), PenaltyKind::Nuclear, lambda_A, cfg);
  return theta.leftCols(Z.rows());
}

Eigen::MatrixXd phi_step(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z, const Eigen::MatrixXd& P,
                         const Eigen::MatrixXd& A_fixed, double lambda_Phi, const ProxConfig& cfg,
                         const Eigen::MatrixXd& warm_start) {
  if (lambda_Phi < 0.0) throw InvalidArgument("lambda_Phi must be nonnegative");
  cfg.validate();
  const Eigen::Index p = Y.rows();
  const Eigen::MatrixXd Phi0 = seed_block(warm_start, p, P.rows());
  check_shapes(Y, Z, P, A_fixed, Phi0);
  const BlockProblem problem(Y, Z, P);
  Eigen::MatrixXd theta(p, problem.num_regressors());
  theta.leftCols(Z.rows()) = A_fixed;
  theta.rightCols(P.rows()) = Phi0;
  solve_block(problem, theta, Z.rows(), P.rows(), PenaltyKind::L1, lambda_Phi, cfg);
  return theta.rightCols(P.rows());
}

RrsraFit fit_rrsra(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z, int d, double lambda_A,
                   double lambda_Phi, const SolverOptions& opts) {
  if (d < 0) throw InvalidArgument("lag order d must be nonnegative");
  if (lambda_A < 0.0 || lambda_Phi < 0.0) throw InvalidArgument("penalties must be nonnegative");
  opts.validate();
  if (Z.cols() != Y.cols()) throw InvalidArgument("time dimension mismatch");

  const Eigen::Index p = Y.rows();
  const Eigen::Index k = Z.rows();
  const Eigen::MatrixXd P = d > 0 ? lag_matrix(Y, d) : Eigen::MatrixXd(0, Y.cols());
  const BlockProblem problem(Y, Z, P);

  RrsraFit fit;
  fit.lambda_A = lambda_A;
  fit.lambda_Phi = lambda_Phi;
  fit.d = d;

  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(p, problem.num_regressors());
  auto objective = [&](const Eigen::MatrixXd& th) {
    return problem.loss(th) + lambda_A * nuclear_norm(th.leftCols(k)) +
           lambda_Phi * th.rightCols(P.rows()).cwiseAbs().sum();
  };

  detail::MonotoneGuard guard(objective(theta), opts.monotone_slack);
  for (int iter = 1; iter <= opts.max_outer; ++iter) {
    const Eigen::MatrixXd previous = theta;
    solve_block(problem, theta, 0, k, PenaltyKind::Nuclear, lambda_A, opts.prox);
    if (d > 0) solve_block(problem, theta, k, P.rows(), PenaltyKind::L1, lambda_Phi, opts.prox);

    const double value = objective(theta);
    guard.record(value, iter);
    fit.objective_trace.push_back(value);
    fit.iterations = iter;

    const bool a_done = detail::relative_change(theta.leftCols(k), previous.leftCols(k)) < opts.outer_tol;
    const bool phi_done = detail::relative_change(theta.rightCols(P.rows()),
                                                  previous.rightCols(P.rows())) < opts.outer_tol;
    if (a_done && phi_done) {
      fit.converged = true;
      break;
    }
  }
  fit.A_hat = theta.leftCols(k);
  fit.Phi_hat = theta.rightCols(P.rows());
  return fit;
}

EffectiveRankReport effective_rank(const RrsraFit& fit, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidArgument("rel_tol must lie in (0, 1)");
  EffectiveRankReport report;
  report.singular_values = linalg::singular_values(fit.A_hat);
  report.rank_A = linalg::numerical_rank(report.singular_values, rel_tol);
  const double peak = fit.Phi_hat.size() ? fit.Phi_hat.cwiseAbs().maxCoeff() : 0.0;
  if (peak > 0.0) {
    for (Eigen::Index i = 0; i < fit.Phi_hat.rows(); ++i)
      for (Eigen::Index j = 0; j < fit.Phi_hat.cols(); ++j)
        if (std::abs(fit.Phi_hat(i, j)) > rel_tol * peak)
          report.support_Phi.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  report.cardinality = static_cast<int>(report.support_Phi.size());
  return report;
}

Eigen::MatrixXd significant_cointegrating_vectors(const RrsraFit& fit, const Eigen::MatrixXd& Bc_hat,
                                                  double rel_tol) {
  if (Bc_hat.cols() != fit.A_hat.cols())
    throw InvalidArgument("Bc_hat column count must match A_hat column count");
  const auto report = effective_rank(fit, rel_tol);
  if (report.rank_A == 0) throw EmptyResult("A_hat has effective rank 0");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(fit.A_hat, Eigen::ComputeThinV);
  const Eigen::MatrixXd R = svd.matrixV().leftCols(report.rank_A);
  return R.transpose() * Bc_hat.transpose();
}

}  // namespace effrank
