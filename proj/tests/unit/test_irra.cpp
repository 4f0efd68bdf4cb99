#include "effrank/block_problem.hpp"
#include "effrank/error.hpp"
#include "effrank/irra.hpp"
#include "effrank/linalg.hpp"
#include "effrank/panel.hpp"
#include "effrank/rrsra.hpp"
#include "effrank/simulate.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace effrank;

TEST_CASE("default_weights") {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  const auto w = default_weights(I, 3);
  REQUIRE(w.size() == 3);
  for (double v : w) CHECK(v == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  Rng rng(60);
  const Eigen::MatrixXd Y = oracle::gaussian(5, 100, rng);
  const double base = default_weights(Y, 1)[0];
  CHECK(default_weights(3.5 * Y, 1)[0] == doctest::Approx(3.5 * base).epsilon(1e-12));
  const Eigen::VectorXd sv = oracle::singular_values(Y.transpose());
  CHECK(base == doctest::Approx(sv(0) * (std::sqrt(5.0) + std::sqrt(5.0)) / 100.0).epsilon(1e-9));

  Eigen::MatrixXd rank_one = oracle::gaussian(4, 1, rng) * oracle::gaussian(1, 30, rng);
  const double s1 = oracle::singular_values(rank_one.transpose())(0);
  CHECK(default_weights(rank_one, 2)[1] == doctest::Approx(s1 * (2.0 + 1.0) / 30.0).epsilon(1e-9));

  CHECK_THROWS_AS(default_weights(Eigen::MatrixXd::Zero(3, 10), 1), DegenerateInput);
  CHECK_THROWS_AS(default_weights(Y, 0), InvalidArgument);
}

TEST_CASE("irra_objective hand instances") {
  Eigen::MatrixXd Y(1, 3), Z(1, 3), A(1, 1);
  Y << 1, 2, 3;
  Z << 1, 0, 1;
  A << 0.5;
  const Eigen::MatrixXd P = lag_matrix(Y, 2);  // rows [0,1,2] and [0,0,1]
  std::vector<Eigen::MatrixXd> Phis{Eigen::MatrixXd::Constant(1, 1, 0.4), Eigen::MatrixXd::Constant(1, 1, -0.2)};
  // fitted: t1 0.5, t2 0.4, t3 0.5 + 0.8 - 0.2 = 1.1; residual 0.5, 1.6, 1.9
  const double loss = (0.25 + 2.56 + 3.61) / 6.0;
  const std::vector<double> w{2.0, 3.0};
  const double expected = loss + 0.1 * 0.5 + 0.05 * (2.0 * 0.4 + 3.0 * 0.2);
  CHECK(irra_objective(Y, Z, P, A, Phis, 0.1, 0.05, w) == doctest::Approx(expected).epsilon(1e-12));

  const std::vector<Eigen::MatrixXd> zeros{Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Zero(1, 1)};
  CHECK(irra_objective(Y, Z, P, Eigen::MatrixXd::Zero(1, 1), zeros, 1.0, 1.0, w) ==
        doctest::Approx(Y.squaredNorm() / 6.0));
  const Eigen::MatrixXd exact = A * Z + Phis[0] * P.row(0) + Phis[1] * P.row(1);
  CHECK(irra_objective(exact, Z, P, A, Phis, 0.0, 0.0, w) == doctest::Approx(0.0));
  CHECK_THROWS_AS(irra_objective(Y, Z, P, A, Phis, 0.1, 0.1, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(irra_objective(Y, Z, P, A, Phis, 0.1, 0.1, {1.0, -1.0}), InvalidArgument);
}

TEST_CASE("huge lambda_Phi reduces IRRA to the A-only problem") {
  Rng rng(61);
  const Eigen::MatrixXd Y = oracle::gaussian(3, 80, rng);
  const Eigen::MatrixXd Z = oracle::gaussian(4, 80, rng);
  const IrraFit irra = fit_irra(Y, Z, 2, 0.05, 1e6, default_weights(Y, 2));
  for (const auto& phi : irra.Phi_hats) CHECK(phi.norm() == 0.0);
  const RrsraFit rrsra = fit_rrsra(Y, Z, 0, 0.05, 0.0);
  CHECK((irra.A_hat - rrsra.A_hat).norm() < 1e-6);
  const RrsraFit rrsra_lag = fit_rrsra(Y, Z, 2, 0.05, 1e6);
  CHECK((irra.A_hat - rrsra_lag.A_hat).norm() < 1e-6);
  CHECK(irra.d() == 2);
  CHECK(irra.weights.size() == 2);
}

TEST_CASE("Phi_1 vanishes at the subgradient threshold") {
  Rng rng(62);
  const int T = 120;
  const Eigen::MatrixXd Y = oracle::gaussian(3, T, rng);
  const Eigen::MatrixXd Z = oracle::gaussian(2, T, rng);
  const double lA = 0.05;
  const Eigen::MatrixXd A_star = oracle::nuclear_regression(Y, Z, lA, 20000);
  const Eigen::MatrixXd P = lag_matrix(Y, 1);
  const double w = 0.7;
  const double cut = oracle::power_sigma_max((Y - A_star * Z) * P.transpose() / T) / w;

  const IrraFit above = fit_irra(Y, Z, 1, lA, cut * 1.01, {w});
  CHECK(above.Phi_hats[0].norm() == 0.0);
  const IrraFit below = fit_irra(Y, Z, 1, lA, cut * 0.95, {w});
  CHECK(below.Phi_hats[0].norm() > 0.0);
}

TEST_CASE("fit_irra objective monotone and consistent") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng(700 + seed);
    const Eigen::MatrixXd Y = oracle::gaussian(3, 90, rng);
    const Eigen::MatrixXd Z = oracle::gaussian(4, 90, rng);
    const double lA = rng.uniform(0.01, 0.2), lPhi = rng.uniform(0.01, 0.3);
    const auto w = default_weights(Y, 2);
    const IrraFit fit = fit_irra(Y, Z, 2, lA, lPhi, w);
    for (std::size_t i = 1; i < fit.objective_trace.size(); ++i)
      CHECK(fit.objective_trace[i] <= fit.objective_trace[i - 1] + 1e-8);
    const double direct = irra_objective(Y, Z, lag_matrix(Y, 2), fit.A_hat, fit.Phi_hats, lA, lPhi, w);
    CHECK(fit.objective_trace.back() == doctest::Approx(direct).epsilon(1e-9));
    CHECK(fit.stacked_phi().cols() == 6);
  }
}

TEST_CASE("Jacobi and Gauss-Seidel reach the same minimizer") {
  Rng rng(63);
  const Eigen::MatrixXd Y = oracle::gaussian(3, 100, rng);
  const Eigen::MatrixXd Z = oracle::gaussian(3, 100, rng);
  const auto w = default_weights(Y, 2);
  SolverOptions opts;
  opts.outer_tol = 1e-9;
  opts.max_outer = 5000;
  const IrraFit gs = fit_irra(Y, Z, 2, 0.05, 0.05, w, opts, BlockUpdate::GaussSeidel);
  const IrraFit jac = fit_irra(Y, Z, 2, 0.05, 0.05, w, opts, BlockUpdate::Jacobi);
  CHECK(jac.update == BlockUpdate::Jacobi);
  CHECK(gs.converged);
  CHECK(jac.converged);
  CHECK(jac.objective_trace.back() == doctest::Approx(gs.objective_trace.back()).epsilon(1e-6));
}

TEST_CASE("nuclear block ranks shrink as the penalty grows on an orthonormal design") {
  Rng rng(64);
  const int T = 60;
  const Eigen::MatrixXd W =
      std::sqrt(static_cast<double>(T)) * random_orthogonal(T, rng).leftCols(6).transpose();
  const Eigen::MatrixXd Y = oracle::gaussian(4, T, rng);
  const BlockProblem problem(Y, W.topRows(2), W.bottomRows(4));
  int previous = 5;
  for (double lambda = 0.0; lambda < 0.6; lambda += 0.03) {
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(4, 6);
    solve_block(problem, theta, 2, 4, PenaltyKind::Nuclear, lambda, {});
    const int rank = linalg::numerical_rank(linalg::singular_values(theta.rightCols(4)), 1e-12);
    CHECK(rank <= 4);
    CHECK(rank <= previous);
    previous = rank;
  }
}

TEST_CASE("phi_block_ranks and effective_rank on the IRRA design") {
  const SimScenario sc = make_scenario_irra(10, 12, 2, 600, 8);
  IrraFit fit;
  fit.A_hat = sc.A;
  fit.Phi_hats = sc.Phis;
  fit.weights = {1.0, 1.0};
  const auto ranks = phi_block_ranks(fit);
  REQUIRE(ranks.size() == 2);
  CHECK(ranks[0] == 3);
  CHECK(ranks[1] == 3);
  CHECK(effective_rank(fit).rank_A == 5);
}

TEST_CASE("fit_irra argument validation") {
  Rng rng(65);
  const Eigen::MatrixXd Y = oracle::gaussian(2, 30, rng);
  const Eigen::MatrixXd Z = oracle::gaussian(2, 30, rng);
  CHECK_THROWS_AS(fit_irra(Y, Z, 0, 0.1, 0.1, {}), InvalidArgument);
  CHECK_THROWS_AS(fit_irra(Y, Z, 2, 0.1, 0.1, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(fit_irra(Y, Z, 1, 0.1, 0.1, {0.0}), InvalidArgument);
  CHECK_THROWS_AS(fit_irra(Y, Z, 1, -0.1, 0.1, {1.0}), InvalidArgument);
}
