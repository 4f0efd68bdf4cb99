#include "effrank/factors.hpp"

#include "effrank/error.hpp"
#include "effrank/linalg.hpp"

#include <cmath>
#include <string>

namespace effrank {

namespace {

FactorFit split_basis(const linalg::SymmetricEigen& eig, const Eigen::MatrixXd& X, int r) {
  const Eigen::Index N = X.rows();
  FactorFit fit;
  fit.r_hat = r;
  fit.eigenvalues = eig.values.cwiseMax(0.0);
  fit.B_hat = eig.vectors.leftCols(r);
  fit.Bc_hat = eig.vectors.rightCols(N - r);
  fit.F_hat = fit.B_hat.transpose() * X;
  return fit;
}

linalg::SymmetricEigen gram_eigen(const Eigen::MatrixXd& X) {
  const Eigen::MatrixXd gram = X * X.transpose();
  return linalg::eigen_descending(gram);
}

int count_trends(const linalg::SymmetricEigen& eig, const Eigen::MatrixXd& X,
                 const TrendDetectorConfig& cfg) {
  const Eigen::Index N = X.rows();
  for (Eigen::Index j = 0; j < N; ++j) {
    const Eigen::VectorXd component = X.transpose() * eig.vectors.col(j);
    double mean_acf = 0.0;
    try {
      mean_acf = acf_abs_sum(component, cfg.k_bar) / cfg.k_bar;
    } catch (const DegenerateSeries&) {
      return static_cast<int>(j);
    }
    if (mean_acf < cfg.delta0) return static_cast<int>(j);
  }
  return static_cast<int>(N);
}

void require_detectable(const Panel& x, const TrendDetectorConfig& cfg) {
  cfg.validate();
  if (x.num_times() <= cfg.k_bar + 1)
    throw InvalidArgument("trend detection needs T > k_bar + 1 (T = " +
                          std::to_string(x.num_times()) + ")");
}

}  // namespace

void TrendDetectorConfig::validate() const {
  if (k_bar < 1) throw InvalidArgument("k_bar must be at least 1");
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw InvalidArgument("delta0 must lie in (0, 1)");
}

FactorFit estimate_loadings(const Panel& x, int r) {
  const Eigen::Index N = x.num_series();
  if (r < 0 || r > N)
    throw InvalidArgument("factor count r=" + std::to_string(r) + " outside [0, " +
                          std::to_string(N) + "]");
  if (x.num_times() < 2) throw InvalidArgument("factor estimation needs T >= 2");
  const Eigen::MatrixXd X = x.series_major();
  return split_basis(gram_eigen(X), X, r);
}

double acf_abs_sum(const Eigen::Ref<const Eigen::VectorXd>& series, int k_bar) {
  if (k_bar < 1) throw InvalidArgument("k_bar must be at least 1");
  const Eigen::Index T = series.size();
  if (T <= k_bar) throw InvalidArgument("ACF needs more than k_bar observations");
  const Eigen::VectorXd dev = series.array() - series.mean();
  const double denom = dev.squaredNorm();
  if (!(denom > 0.0) || !std::isfinite(denom))
    throw DegenerateSeries("series has zero variance");
  double total = 0.0;
  for (int k = 1; k <= k_bar; ++k)
    total += std::abs(dev.tail(T - k).dot(dev.head(T - k)) / denom);
  return total;
}

int detect_num_trends(const Panel& x, const TrendDetectorConfig& cfg) {
  require_detectable(x, cfg);
  const Eigen::MatrixXd X = x.series_major();
  return count_trends(gram_eigen(X), X, cfg);
}

FactorFit fit_factors(const Panel& x, const TrendDetectorConfig& cfg) {
  require_detectable(x, cfg);
  const Eigen::MatrixXd X = x.series_major();
  const auto eig = gram_eigen(X);
  return split_basis(eig, X, count_trends(eig, X, cfg));
}

Panel cointegrated_series(const Panel& x, const FactorFit& fit) {
  if (x.num_series() != fit.dimension())
    throw InvalidArgument("cointegrated_series: panel has " + std::to_string(x.num_series()) +
                          " columns, fit expects " + std::to_string(fit.dimension()));
  if (fit.Bc_hat.cols() == 0)
    throw InvalidArgument("cointegrated_series: no cointegrating directions (r_hat = N)");
  return Panel(x.values() * fit.Bc_hat);
}

double factor_recovery_rmse(const Eigen::MatrixXd& truth_B, const Eigen::MatrixXd& truth_F,
                            const FactorFit& fit) {
  if (truth_B.cols() != truth_F.rows() || truth_B.rows() != fit.B_hat.rows() ||
      truth_F.cols() != fit.F_hat.cols())
    throw InvalidArgument("factor_recovery_rmse: dimension mismatch");
  const double N = static_cast<double>(truth_B.rows());
  const double T = static_cast<double>(truth_F.cols());
  const Eigen::MatrixXd diff = truth_B * truth_F - fit.B_hat * fit.F_hat;
  return std::sqrt(diff.squaredNorm() / (N * T));
}

}  // namespace effrank
