#pragma once

#include "effrank/panel.hpp"
#include "effrank/simulate.hpp"
#include "effrank/tuning.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace effrank {

/// Per-replication values with nearest-rank quantiles.
struct MetricSummary {
  std::vector<double> values;
  double min = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, max = 0.0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1); 0 for one value
  std::size_t count() const noexcept { return values.size(); }
};

/// Nearest-rank quantile of sorted data: element ceil(q n) - 1, clamped to [0, n - 1].
double nearest_rank_quantile(const std::vector<double>& sorted, double q);
MetricSummary summarize(std::vector<double> values);

/// ||M1 M1' - M2 M2'||_2 for matrices with orthonormal columns (checked to 1e-8).
double subspace_distance(const Eigen::MatrixXd& M1, const Eigen::MatrixXd& M2);

/// ||M1 M1' - M2 M2'||_2 without the orthonormality check. Used for A, whose
/// Gram matrix A A' = W W' (W = A Bc') is identified even though A is not.
double gram_distance(const Eigen::MatrixXd& M1, const Eigen::MatrixXd& M2);

/// ((1/(pT)) sum_t ||A z_{t-1} + Phi P_{t-1} - (A_hat z_hat_{t-1} + Phi_hat P_{t-1})||^2)^{1/2}
/// z_hat_lagged is k_hat x T with column t-1 holding z_hat_{t-1}.
double fit_rmse(const SimScenario& truth, const SimSample& sample, const LinearPredictor& fit,
                const Eigen::MatrixXd& z_hat_lagged);

/// 1 - ||y_true - y_pred||^2 / ||y_true||^2.
double oos_r2(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

struct VarFit {
  Eigen::MatrixXd Phi;  // p x (d p)
  int d = 0;
  bool underdetermined = false;  // minimum-norm solution of a rank-deficient design
};

/// Row-wise least squares of y_t on P_{t-1} over all T rows (zero pre-sample lags).
VarFit naive_var_fit(const Panel& y, int d);

Eigen::VectorXd random_walk_predict(const Eigen::VectorXd& y_t);

enum class ForecastKind { Rrsra, Irra, NaiveVar, RandomWalk };

struct ForecastModel {
  ForecastKind kind = ForecastKind::Rrsra;
  ModelSpec spec{};                  // penalties and lag order; d is also the VAR order
  std::optional<TuningGrid> tuning;  // select spec on data through the split
  bool reselect_each_origin = false;
};

struct ForecastReport {
  std::string model;
  std::vector<Eigen::Index> origins;  // 1-based t; the prediction target is t + 1
  std::vector<double> r2;
  Eigen::MatrixXd predictions;  // one row per origin: the forecast of y_{t+1}
  MetricSummary summary;
  std::vector<ModelSpec> specs;  // spec used at each origin (penalized methods)
  bool underdetermined = false;  // any naive VAR fit fell back to minimum norm
};

std::string model_tag(const ForecastModel& model);

/// Expanding-window evaluation: for each origin t = split..T-1, refit on data
/// through t and score the prediction of y_{t+1} by oos_r2. Origins run on up
/// to `jobs` threads; results are ordered by origin.
ForecastReport run_expanding_window(const Panel& x, const Panel& y, Eigen::Index split,
                                    const ForecastModel& model, const PipelineOptions& opts = {},
                                    int jobs = 1);

/// Serial reference for run_expanding_window.
ForecastReport run_expanding_window_serial(const Panel& x, const Panel& y, Eigen::Index split,
                                           const ForecastModel& model,
                                           const PipelineOptions& opts = {});

/// One Monte Carlo study: a fixed scenario per (design, seed), fresh noise per
/// replication. Loading distances use the true r;
/// coefficients are fitted through the full pipeline, r detected unless frozen.
struct StudyConfig {
  DgpKind kind = DgpKind::Rrsra;
  int p = 20, N = 20, r = 3, T = 400;
  std::uint64_t seed = 1;
  int replications = 100;
  bool fit_coefficients = true;
  ModelSpec spec{};
  PipelineOptions options{};
  double rel_tol = 1e-2;
};

struct ReplicationMetrics {
  int r_hat = 0;
  double loading_distance = 0.0;   // ||B_hat B_hat' - B B'||_2 with r known
  double factor_rmse = 0.0;
  double a_distance = 0.0;         // ||A_hat A_hat' - A A'||_2
  std::vector<double> phi_errors;  // ||Phi_hat - Phi||_2, stacked (RRSRA) or per lag (IRRA)
  int rank_A = 0;
  std::vector<int> ranks_Phi;      // IRRA only
  int support_size = 0;
  double fit_rmse = 0.0;
  bool converged = false;
};

/// Rate-based penalties sqrt((p+N)/T) and sqrt(log p / T).
ModelSpec rate_spec(Method method, int p, int N, int T, int d);

ReplicationMetrics run_replication(const SimScenario& scenario, const StudyConfig& cfg,
                                   std::uint64_t replication);
std::vector<ReplicationMetrics> simulation_study(const StudyConfig& cfg, int jobs = 1);
std::vector<ReplicationMetrics> simulation_study_serial(const StudyConfig& cfg);

}  // namespace effrank
