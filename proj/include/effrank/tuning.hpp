#pragma once

#include "effrank/factors.hpp"
#include "effrank/irra.hpp"
#include "effrank/panel.hpp"
#include "effrank/rrsra.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <tuple>
#include <variant>
#include <vector>

namespace effrank {

enum class Method { Rrsra, Irra };

/// One point of the (lambda_A, lambda_Phi, d) search space.
struct ModelSpec {
  Method method = Method::Rrsra;
  double lambda_A = 0.0;
  double lambda_Phi = 0.0;
  int d = 1;
};

/// Settings for the two-step pipeline that are not tuned.
struct PipelineOptions {
  TrendDetectorConfig detector{};
  std::optional<int> frozen_r;  // skip detection and use this factor count
  SolverOptions solver{};
  BlockUpdate update = BlockUpdate::GaussSeidel;
  std::optional<double> irra_weight;  // overrides default_weights when set
};

using CoefficientFit = std::variant<RrsraFit, IrraFit>;

/// Step 1 plus step 2 on one sample.
struct PipelineFit {
  FactorFit factors;
  CoefficientFit coefficients;
  ModelSpec spec;
};

/// Coefficient view used for prediction: A (p x k) and [Phi_1..Phi_d].
struct LinearPredictor {
  Eigen::MatrixXd A;
  Eigen::MatrixXd Phi;
  int d = 0;
};

LinearPredictor predictor_of(const RrsraFit& fit);
LinearPredictor predictor_of(const IrraFit& fit);
LinearPredictor predictor_of(const CoefficientFit& fit);

/// A z_prev + sum_i Phi_i y_{t+1-i}, where the last row of `y_history` is y_t.
/// Lags beyond the available history are zero.
Eigen::VectorXd predict_one_step(const LinearPredictor& model, const Eigen::VectorXd& z_prev,
                                 const Eigen::MatrixXd& y_history);
Eigen::VectorXd predict_one_step(const CoefficientFit& fit, const Eigen::VectorXd& z_prev,
                                 const Panel& y_history);

/// Fits the regression step against a given factor basis: z_hat_t = Bc' x_t for
/// the rows of x, regressors z_hat_{t-1} with z_hat_0 = 0.
CoefficientFit fit_coefficients(const FactorFit& factors, const Eigen::MatrixXd& x_series_major,
                                const Eigen::MatrixXd& y_series_major, const ModelSpec& spec,
                                const PipelineOptions& opts);

/// Factor step on all of x, regression step on all of y (same T).
PipelineFit fit_pipeline(const Panel& x, const Panel& y, const ModelSpec& spec,
                         const PipelineOptions& opts = {});

/// Prediction of y_{t+1} from data through time t (1-based): the factor step
/// sees x_1..x_{t-1}, the regression y_1..y_t, the predictor z_hat_t = Bc' x_t.
Eigen::VectorXd forecast_next(const Panel& x, const Panel& y, Eigen::Index t, const ModelSpec& spec,
                              const PipelineOptions& opts = {});

/// (1 / (p (T - T1))) sum_{j=0}^{T-T1-1} ||y_hat_{T1+j+1} - y_{T1+j+1}||^2 over
/// expanding windows.
double forecast_error(const Panel& x, const Panel& y, const ModelSpec& spec, Eigen::Index T1,
                      const PipelineOptions& opts = {});

struct TuningGrid {
  std::vector<double> lambda_A_values;
  std::vector<double> lambda_Phi_values;
  std::vector<int> d_values;
  Eigen::Index T1 = 0;

  void validate(Eigen::Index T) const;
};

/// C * sqrt((p + N) / T) and C * sqrt(log(p) / T) for C in {0.25, 0.5, 1, 2, 4},
/// d in 0..d_max.
TuningGrid default_grid(int p, int N, Eigen::Index T, Eigen::Index T1, int d_max = 3);

using GridKey = std::tuple<double, double, int>;  // (lambda_A, lambda_Phi, d)

struct TuningResult {
  ModelSpec best;
  double best_fe = 0.0;
  std::map<GridKey, double> fe_surface;
};

/// Grid points in evaluation order: d outermost, then lambda_A, then lambda_Phi.
std::vector<ModelSpec> enumerate_grid(const TuningGrid& grid, Method method);

/// Global argmin of the forecast error. Ties go to the smallest d, then the
/// largest lambda_A, then the largest lambda_Phi. Grid points are evaluated on
/// up to `jobs` threads.
TuningResult select_tuning(const Panel& x, const Panel& y, const TuningGrid& grid, Method method,
                           const PipelineOptions& opts = {}, int jobs = 1);

/// Serial reference for select_tuning.
TuningResult select_tuning_serial(const Panel& x, const Panel& y, const TuningGrid& grid,
                                  Method method, const PipelineOptions& opts = {});

/// Applies the tie-breaking rule to an already evaluated surface.
TuningResult pick_best(const std::vector<ModelSpec>& points, const std::vector<double>& fe);

}  // namespace effrank
