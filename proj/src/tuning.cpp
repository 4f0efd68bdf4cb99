#include "effrank/tuning.hpp"

#include "effrank/error.hpp"
#include "effrank/parallel.hpp"

#include <cmath>
#include <string>

namespace effrank {

LinearPredictor predictor_of(const RrsraFit& fit) { return {fit.A_hat, fit.Phi_hat, fit.d}; }

LinearPredictor predictor_of(const IrraFit& fit) { return {fit.A_hat, fit.stacked_phi(), fit.d()}; }

LinearPredictor predictor_of(const CoefficientFit& fit) {
  return std::visit([](const auto& f) { return predictor_of(f); }, fit);
}

Eigen::VectorXd predict_one_step(const LinearPredictor& model, const Eigen::VectorXd& z_prev,
                                 const Eigen::MatrixXd& y_history) {
  const Eigen::Index p = model.A.rows();
  if (z_prev.size() != model.A.cols())
    throw InvalidArgument("predict_one_step: z has length " + std::to_string(z_prev.size()) +
                          ", A expects " + std::to_string(model.A.cols()));
  if (model.d > 0 && y_history.cols() != p)
    throw InvalidArgument("predict_one_step: y history has the wrong number of series");
  Eigen::VectorXd out = model.A.size() ? Eigen::VectorXd(model.A * z_prev) : Eigen::VectorXd::Zero(p);
  const Eigen::Index T = y_history.rows();
  for (int i = 1; i <= model.d && i <= T; ++i)
    out += model.Phi.middleCols((i - 1) * p, p) * y_history.row(T - i).transpose();
  return out;
}

Eigen::VectorXd predict_one_step(const CoefficientFit& fit, const Eigen::VectorXd& z_prev,
                                 const Panel& y_history) {
  return predict_one_step(predictor_of(fit), z_prev, y_history.values());
}

CoefficientFit fit_coefficients(const FactorFit& factors, const Eigen::MatrixXd& X,
                                const Eigen::MatrixXd& Y, const ModelSpec& spec,
                                const PipelineOptions& opts) {
  if (X.rows() != factors.dimension()) throw InvalidArgument("x does not match the factor basis");
  if (X.cols() != Y.cols()) throw InvalidArgument("x and y must cover the same time points");
  if (spec.d < 0) throw InvalidArgument("lag order d must be nonnegative");

  const Eigen::MatrixXd z_hat = factors.Bc_hat.transpose() * X;
  const Eigen::MatrixXd Z_lagged =
      z_hat.rows() > 0 ? lag_matrix(z_hat, 1) : Eigen::MatrixXd(0, X.cols());

  if (spec.method == Method::Rrsra || spec.d == 0)
    return fit_rrsra(Y, Z_lagged, spec.d, spec.lambda_A, spec.lambda_Phi, opts.solver);

  const auto weights = opts.irra_weight ? std::vector<double>(spec.d, *opts.irra_weight)
                                        : default_weights(Y, spec.d);
  return fit_irra(Y, Z_lagged, spec.d, spec.lambda_A, spec.lambda_Phi, weights, opts.solver,
                  opts.update);
}

namespace {

FactorFit factor_step(const Panel& x, const PipelineOptions& opts) {
  return opts.frozen_r ? estimate_loadings(x, *opts.frozen_r) : fit_factors(x, opts.detector);
}

}  // namespace

PipelineFit fit_pipeline(const Panel& x, const Panel& y, const ModelSpec& spec,
                         const PipelineOptions& opts) {
  if (x.num_times() != y.num_times()) throw InvalidArgument("x and y must have the same length");
  FactorFit factors = factor_step(x, opts);
  auto coefficients = fit_coefficients(factors, x.series_major(), y.series_major(), spec, opts);
  return {std::move(factors), std::move(coefficients), spec};
}

Eigen::VectorXd forecast_next(const Panel& x, const Panel& y, Eigen::Index t, const ModelSpec& spec,
                              const PipelineOptions& opts) {
  if (t < 2 || t > x.num_times() || t > y.num_times())
    throw InvalidArgument("forecast origin " + std::to_string(t) + " out of range");
  const FactorFit factors = factor_step(x.head(t - 1), opts);
  const Eigen::MatrixXd X = x.values().topRows(t).transpose();
  const Eigen::MatrixXd Y = y.values().topRows(t).transpose();
  const auto fit = fit_coefficients(factors, X, Y, spec, opts);
  const Eigen::VectorXd z_t = factors.Bc_hat.transpose() * X.col(t - 1);
  return predict_one_step(predictor_of(fit), z_t, Y.transpose());
}

double forecast_error(const Panel& x, const Panel& y, const ModelSpec& spec, Eigen::Index T1,
                      const PipelineOptions& opts) {
  const Eigen::Index T = y.num_times();
  if (x.num_times() != T) throw InvalidArgument("x and y must have the same length");
  if (T1 < 2 || T1 >= T) throw InvalidArgument("need 2 <= T1 < T");
  if (T1 <= spec.d)
    throw InvalidArgument("training window T1=" + std::to_string(T1) + " too short for lag order " +
                          std::to_string(spec.d));
  double total = 0.0;
  for (Eigen::Index t = T1; t < T; ++t) {
    const Eigen::VectorXd pred = forecast_next(x, y, t, spec, opts);
    total += (pred - y.values().row(t).transpose()).squaredNorm();
  }
  const double p = static_cast<double>(y.num_series());
  return total / (p * static_cast<double>(T - T1));
}

void TuningGrid::validate(Eigen::Index T) const {
  if (lambda_A_values.empty() || lambda_Phi_values.empty() || d_values.empty())
    throw InvalidArgument("tuning grid lists must be nonempty");
  for (double v : lambda_A_values)
    if (!(v > 0.0)) throw InvalidArgument("lambda_A grid values must be positive");
  for (double v : lambda_Phi_values)
    if (!(v > 0.0)) throw InvalidArgument("lambda_Phi grid values must be positive");
  for (int d : d_values)
    if (d < 0) throw InvalidArgument("lag orders must be nonnegative");
  if (T1 < 1 || T1 >= T) throw InvalidArgument("need 1 <= T1 < T");
}

TuningGrid default_grid(int p, int N, Eigen::Index T, Eigen::Index T1, int d_max) {
  TuningGrid grid;
  const double rate_A = std::sqrt(static_cast<double>(p + N) / static_cast<double>(T));
  const double rate_Phi = std::sqrt(std::log(static_cast<double>(std::max(p, 2))) / static_cast<double>(T));
  for (double c : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    grid.lambda_A_values.push_back(c * rate_A);
    grid.lambda_Phi_values.push_back(c * rate_Phi);
  }
  for (int d = 0; d <= d_max; ++d) grid.d_values.push_back(d);
  grid.T1 = T1;
  return grid;
}

std::vector<ModelSpec> enumerate_grid(const TuningGrid& grid, Method method) {
  std::vector<ModelSpec> points;
  for (int d : grid.d_values)
    for (double la : grid.lambda_A_values)
      for (double lp : grid.lambda_Phi_values) points.push_back({method, la, lp, d});
  return points;
}

TuningResult pick_best(const std::vector<ModelSpec>& points, const std::vector<double>& fe) {
  if (points.empty() || points.size() != fe.size()) throw InvalidArgument("empty tuning surface");
  TuningResult result;
  std::size_t best = 0;
  auto better = [&](std::size_t a, std::size_t b) {
    if (fe[a] != fe[b]) return fe[a] < fe[b];
    if (points[a].d != points[b].d) return points[a].d < points[b].d;
    if (points[a].lambda_A != points[b].lambda_A) return points[a].lambda_A > points[b].lambda_A;
    return points[a].lambda_Phi > points[b].lambda_Phi;
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    result.fe_surface[{points[i].lambda_A, points[i].lambda_Phi, points[i].d}] = fe[i];
    if (better(i, best)) best = i;
  }
  result.best = points[best];
  result.best_fe = fe[best];
  return result;
}

TuningResult select_tuning(const Panel& x, const Panel& y, const TuningGrid& grid, Method method,
                           const PipelineOptions& opts, int jobs) {
  grid.validate(y.num_times());
  const auto points = enumerate_grid(grid, method);
  const auto fe = parallel_map<double>(points.size(), jobs, [&](std::size_t i) {
    return forecast_error(x, y, points[i], grid.T1, opts);
  });
  return pick_best(points, fe);
}

TuningResult select_tuning_serial(const Panel& x, const Panel& y, const TuningGrid& grid,
                                  Method method, const PipelineOptions& opts) {
  grid.validate(y.num_times());
  const auto points = enumerate_grid(grid, method);
  const auto fe = serial_map<double>(points.size(), [&](std::size_t i) {
    return forecast_error(x, y, points[i], grid.T1, opts);
  });
  return pick_best(points, fe);
}

}  // namespace effrank
