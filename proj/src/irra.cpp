#include "effrank/irra.hpp"

#include "effrank/block_problem.hpp"
#include "effrank/error.hpp"
#include "effrank/linalg.hpp"
#include "effrank/panel.hpp"
#include "solver_common.hpp"

#include <cmath>
#include <string>

namespace effrank {

Eigen::MatrixXd IrraFit::stacked_phi() const {
  const Eigen::Index p = A_hat.rows();
  Eigen::MatrixXd out(p, p * static_cast<Eigen::Index>(Phi_hats.size()));
  for (std::size_t i = 0; i < Phi_hats.size(); ++i)
    out.middleCols(static_cast<Eigen::Index>(i) * p, p) = Phi_hats[i];
  return out;
}

std::vector<double> default_weights(const Eigen::MatrixXd& Y, int d) {
  if (d < 1) throw InvalidArgument("default_weights needs d >= 1");
  const Eigen::VectorXd sv = linalg::singular_values(Y);
  if (sv.size() == 0 || !(sv(0) > 0.0)) throw DegenerateInput("response matrix is zero");
  const double rank = linalg::numerical_rank(sv, 1e-10);
  const double p = static_cast<double>(Y.rows());
  const double T = static_cast<double>(Y.cols());
  return std::vector<double>(static_cast<std::size_t>(d),
                             sv(0) * (std::sqrt(p) + std::sqrt(rank)) / T);
}

namespace {

void check_weights(const std::vector<double>& weights, int d) {
  if (static_cast<int>(weights.size()) != d)
    throw InvalidArgument("expected " + std::to_string(d) + " weights, got " +
                          std::to_string(weights.size()));
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("weights must be positive");
}

double penalty(const Eigen::MatrixXd& theta, Eigen::Index k, Eigen::Index p, double lambda_A,
               double lambda_Phi, const std::vector<double>& weights) {
  double total = lambda_A * nuclear_norm(theta.leftCols(k));
  for (std::size_t i = 0; i < weights.size(); ++i)
    total += lambda_Phi * weights[i] *
             nuclear_norm(theta.middleCols(k + static_cast<Eigen::Index>(i) * p, p));
  return total;
}

}  // namespace

double irra_objective(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z, const Eigen::MatrixXd& P,
                      const Eigen::MatrixXd& A, const std::vector<Eigen::MatrixXd>& Phis,
                      double lambda_A, double lambda_Phi, const std::vector<double>& weights) {
  const Eigen::Index p = Y.rows();
  const Eigen::Index T = Y.cols();
  const int d = static_cast<int>(Phis.size());
  check_weights(weights, d);
  if (T < 1 || Z.cols() != T || P.cols() != T || P.rows() != d * p)
    throw InvalidArgument("irra_objective: shape mismatch");
  if (A.rows() != p || A.cols() != Z.rows()) throw InvalidArgument("irra_objective: A shape");
  Eigen::MatrixXd resid = Y;
  if (A.size()) resid -= A * Z;
  double pen = lambda_A * nuclear_norm(A);
  for (int i = 0; i < d; ++i) {
    if (Phis[i].rows() != p || Phis[i].cols() != p)
      throw InvalidArgument("irra_objective: Phi block shape");
    resid -= Phis[i] * P.middleRows(i * p, p);
    pen += lambda_Phi * weights[i] * nuclear_norm(Phis[i]);
  }
  return resid.squaredNorm() / (2.0 * static_cast<double>(T)) + pen;
}

IrraFit fit_irra(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& Z, int d, double lambda_A,
                 double lambda_Phi, const std::vector<double>& weights, const SolverOptions& opts,
                 BlockUpdate update) {
  if (d < 1) throw InvalidArgument("IRRA needs d >= 1");
  if (lambda_A < 0.0 || lambda_Phi < 0.0) throw InvalidArgument("penalties must be nonnegative");
  check_weights(weights, d);
  opts.validate();
  if (Z.cols() != Y.cols()) throw InvalidArgument("time dimension mismatch");

  const Eigen::Index p = Y.rows();
  const Eigen::Index k = Z.rows();
  const BlockProblem problem(Y, Z, lag_matrix(Y, d));

  IrraFit fit;
  fit.lambda_A = lambda_A;
  fit.lambda_Phi = lambda_Phi;
  fit.weights = weights;
  fit.update = update;

  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(p, problem.num_regressors());
  auto objective = [&](const Eigen::MatrixXd& th) {
    return problem.loss(th) + penalty(th, k, p, lambda_A, lambda_Phi, weights);
  };
  const bool guarded = update == BlockUpdate::GaussSeidel;
  detail::MonotoneGuard guard(objective(theta), opts.monotone_slack);

  for (int iter = 1; iter <= opts.max_outer; ++iter) {
    const Eigen::MatrixXd previous = theta;
    solve_block(problem, theta, 0, k, PenaltyKind::Nuclear, lambda_A, opts.prox);
    if (update == BlockUpdate::GaussSeidel) {
      for (int i = 0; i < d; ++i)
        solve_block(problem, theta, k + i * p, p, PenaltyKind::Nuclear, lambda_Phi * weights[i],
                    opts.prox);
    } else {
      const Eigen::MatrixXd sweep_start = theta;
      Eigen::MatrixXd updated = theta;
      for (int i = 0; i < d; ++i) {
        Eigen::MatrixXd scratch = sweep_start;
        solve_block(problem, scratch, k + i * p, p, PenaltyKind::Nuclear, lambda_Phi * weights[i],
                    opts.prox);
        updated.middleCols(k + i * p, p) = scratch.middleCols(k + i * p, p);
      }
      theta = updated;
    }

    const double value = objective(theta);
    if (guarded) guard.record(value, iter);
    fit.objective_trace.push_back(value);
    fit.iterations = iter;

    bool done = detail::relative_change(theta.leftCols(k), previous.leftCols(k)) < opts.outer_tol;
    for (int i = 0; i < d && done; ++i)
      done = detail::relative_change(theta.middleCols(k + i * p, p),
                                     previous.middleCols(k + i * p, p)) < opts.outer_tol;
    if (done) {
      fit.converged = true;
      break;
    }
  }
  fit.A_hat = theta.leftCols(k);
  for (int i = 0; i < d; ++i) fit.Phi_hats.push_back(theta.middleCols(k + i * p, p));
  return fit;
}

std::vector<int> phi_block_ranks(const IrraFit& fit, double rel_tol) {
  std::vector<int> ranks;
  for (const auto& block : fit.Phi_hats)
    ranks.push_back(linalg::numerical_rank(linalg::singular_values(block), rel_tol));
  return ranks;
}

EffectiveRankReport effective_rank(const IrraFit& fit, double rel_tol) {
  RrsraFit view;
  view.A_hat = fit.A_hat;
  view.Phi_hat = fit.stacked_phi();
  view.d = fit.d();
  return effective_rank(view, rel_tol);
}

}  // namespace effrank
