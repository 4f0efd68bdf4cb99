#include "effrank/eval.hpp"

#include "effrank/error.hpp"
#include "effrank/linalg.hpp"
#include "effrank/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace effrank {

double nearest_rank_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  const auto n = static_cast<double>(sorted.size());
  const auto rank = static_cast<long>(std::ceil(q * n)) - 1;
  const auto idx = std::clamp<long>(rank, 0, static_cast<long>(sorted.size()) - 1);
  return sorted[static_cast<std::size_t>(idx)];
}

MetricSummary summarize(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("cannot summarize an empty sample");
  MetricSummary s;
  s.values = values;
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  s.q25 = nearest_rank_quantile(values, 0.25);
  s.median = nearest_rank_quantile(values, 0.5);
  s.q75 = nearest_rank_quantile(values, 0.75);
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

double gram_distance(const Eigen::MatrixXd& M1, const Eigen::MatrixXd& M2) {
  if (M1.rows() != M2.rows()) throw InvalidArgument("gram_distance: row counts differ");
  const Eigen::Index n = M1.rows();
  Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(n, n);
  if (M1.cols()) diff += M1 * M1.transpose();
  if (M2.cols()) diff -= M2 * M2.transpose();
  if (n == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(diff, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double subspace_distance(const Eigen::MatrixXd& M1, const Eigen::MatrixXd& M2) {
  if (linalg::orthonormality_error(M1) > 1e-8 || linalg::orthonormality_error(M2) > 1e-8)
    throw InvalidArgument("subspace_distance needs orthonormal columns");
  return gram_distance(M1, M2);
}

double fit_rmse(const SimScenario& truth, const SimSample& sample, const LinearPredictor& fit,
                const Eigen::MatrixXd& z_hat_lagged) {
  const Eigen::MatrixXd Y = sample.y.series_major();
  const Eigen::Index T = Y.cols();
  const Eigen::Index p = Y.rows();
  if (fit.A.rows() != p || fit.A.cols() != z_hat_lagged.rows() || z_hat_lagged.cols() != T ||
      fit.Phi.rows() != p || fit.Phi.cols() != fit.d * p)
    throw InvalidArgument("fit_rmse: shape mismatch");

  Eigen::MatrixXd diff = truth.A * lag_matrix(sample.z, 1);
  if (truth.d > 0) diff += truth.stacked_phi() * lag_matrix(Y, truth.d);
  if (fit.A.size()) diff -= fit.A * z_hat_lagged;
  if (fit.d > 0) diff -= fit.Phi * lag_matrix(Y, fit.d);
  return std::sqrt(diff.squaredNorm() / (static_cast<double>(p) * static_cast<double>(T)));
}

double oos_r2(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size()) throw InvalidArgument("oos_r2: length mismatch");
  const double denom = y_true.squaredNorm();
  if (!(denom > 0.0)) throw DegenerateTarget("realized target is zero");
  return 1.0 - (y_true - y_pred).squaredNorm() / denom;
}

VarFit naive_var_fit(const Panel& y, int d) {
  const Eigen::MatrixXd Y = y.series_major();
  const Eigen::MatrixXd P = lag_matrix(Y, d);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(P.transpose());
  VarFit fit;
  fit.d = d;
  fit.Phi = cod.solve(Y.transpose()).transpose();
  fit.underdetermined = cod.rank() < P.rows();
  return fit;
}

Eigen::VectorXd random_walk_predict(const Eigen::VectorXd& y_t) { return y_t; }

std::string model_tag(const ForecastModel& model) {
  switch (model.kind) {
    case ForecastKind::Rrsra: return "rrsra";
    case ForecastKind::Irra: return "irra";
    case ForecastKind::NaiveVar: return "var" + std::to_string(model.spec.d);
    case ForecastKind::RandomWalk: return "rw";
  }
  return "unknown";
}

namespace {

struct OriginResult {
  double r2 = 0.0;
  Eigen::VectorXd prediction;
  ModelSpec spec{};
  bool underdetermined = false;
};

Method method_of(ForecastKind kind) { return kind == ForecastKind::Irra ? Method::Irra : Method::Rrsra; }

bool penalized(ForecastKind kind) { return kind == ForecastKind::Rrsra || kind == ForecastKind::Irra; }

ModelSpec base_spec(const Panel& x, const Panel& y, Eigen::Index split, const ForecastModel& model,
                    const PipelineOptions& opts) {
  ModelSpec spec = model.spec;
  spec.method = method_of(model.kind);
  if (penalized(model.kind) && model.tuning && !model.reselect_each_origin)
    spec = select_tuning(x.head(split), y.head(split), *model.tuning, spec.method, opts).best;
  return spec;
}

OriginResult evaluate_origin(const Panel& x, const Panel& y, Eigen::Index t, const ModelSpec& base,
                             const ForecastModel& model, const PipelineOptions& opts) {
  OriginResult out;
  out.spec = base;
  const Eigen::VectorXd target = y.values().row(t).transpose();
  Eigen::VectorXd pred;
  switch (model.kind) {
    case ForecastKind::Rrsra:
    case ForecastKind::Irra: {
      if (model.tuning && model.reselect_each_origin)
        out.spec = select_tuning(x.head(t), y.head(t), *model.tuning, base.method, opts).best;
      pred = forecast_next(x, y, t, out.spec, opts);
      break;
    }
    case ForecastKind::NaiveVar: {
      const VarFit var = naive_var_fit(y.head(t), base.d);
      out.underdetermined = var.underdetermined;
      const LinearPredictor lp{Eigen::MatrixXd(y.num_series(), 0), var.Phi, var.d};
      pred = predict_one_step(lp, Eigen::VectorXd(0), y.values().topRows(t));
      break;
    }
    case ForecastKind::RandomWalk:
      pred = random_walk_predict(y.values().row(t - 1).transpose());
      break;
  }
  out.r2 = oos_r2(target, pred);
  out.prediction = std::move(pred);
  return out;
}

void check_split(const Panel& x, const Panel& y, Eigen::Index split, const ForecastModel& model) {
  if (x.num_times() != y.num_times()) throw InvalidArgument("x and y must have the same length");
  if (split < 2 || split >= y.num_times())
    throw InvalidArgument("split index must satisfy 2 <= split < T");
  if (model.kind == ForecastKind::NaiveVar && model.spec.d < 1)
    throw InvalidArgument("naive VAR needs d >= 1");
  if (split <= model.spec.d) throw InvalidArgument("split index too small for the lag order");
}

ForecastReport assemble(const ForecastModel& model, Eigen::Index split,
                        const std::vector<OriginResult>& results) {
  ForecastReport report;
  report.model = model_tag(model);
  const Eigen::Index p = results.empty() ? 0 : results.front().prediction.size();
  report.predictions.resize(static_cast<Eigen::Index>(results.size()), p);
  for (std::size_t i = 0; i < results.size(); ++i) {
    report.origins.push_back(split + static_cast<Eigen::Index>(i));
    report.r2.push_back(results[i].r2);
    report.predictions.row(static_cast<Eigen::Index>(i)) = results[i].prediction.transpose();
    if (penalized(model.kind)) report.specs.push_back(results[i].spec);
    report.underdetermined = report.underdetermined || results[i].underdetermined;
  }
  report.summary = summarize(report.r2);
  return report;
}

}  // namespace

ForecastReport run_expanding_window(const Panel& x, const Panel& y, Eigen::Index split,
                                    const ForecastModel& model, const PipelineOptions& opts,
                                    int jobs) {
  check_split(x, y, split, model);
  const ModelSpec base = base_spec(x, y, split, model, opts);
  const auto n = static_cast<std::size_t>(y.num_times() - split);
  const auto results = parallel_map<OriginResult>(n, jobs, [&](std::size_t i) {
    return evaluate_origin(x, y, split + static_cast<Eigen::Index>(i), base, model, opts);
  });
  return assemble(model, split, results);
}

ForecastReport run_expanding_window_serial(const Panel& x, const Panel& y, Eigen::Index split,
                                           const ForecastModel& model,
                                           const PipelineOptions& opts) {
  check_split(x, y, split, model);
  const ModelSpec base = base_spec(x, y, split, model, opts);
  const auto n = static_cast<std::size_t>(y.num_times() - split);
  const auto results = serial_map<OriginResult>(n, [&](std::size_t i) {
    return evaluate_origin(x, y, split + static_cast<Eigen::Index>(i), base, model, opts);
  });
  return assemble(model, split, results);
}

ModelSpec rate_spec(Method method, int p, int N, int T, int d) {
  const double t = static_cast<double>(T);
  return {method, std::sqrt(static_cast<double>(p + N) / t),
          std::sqrt(std::log(static_cast<double>(std::max(p, 2))) / t), d};
}

ReplicationMetrics run_replication(const SimScenario& scenario, const StudyConfig& cfg,
                                   std::uint64_t replication) {
  Rng rng = replication_rng(cfg.seed, replication);
  const SimSample sample = generate(scenario, rng);
  ReplicationMetrics m;

  const FactorFit known = estimate_loadings(sample.x, scenario.r);
  m.loading_distance = subspace_distance(known.B_hat, scenario.B);
  m.factor_rmse = factor_recovery_rmse(scenario.B, sample.f, known);
  m.r_hat = cfg.options.frozen_r ? *cfg.options.frozen_r : detect_num_trends(sample.x, cfg.options.detector);
  if (!cfg.fit_coefficients) return m;

  const PipelineFit fit = fit_pipeline(sample.x, sample.y, cfg.spec, cfg.options);
  const LinearPredictor lp = predictor_of(fit.coefficients);
  m.a_distance = gram_distance(lp.A, scenario.A);
  const EffectiveRankReport report =
      std::visit([&](const auto& f) { return effective_rank(f, cfg.rel_tol); }, fit.coefficients);
  m.rank_A = report.rank_A;
  m.support_size = report.cardinality;
  m.converged = std::visit([](const auto& f) { return f.converged; }, fit.coefficients);

  if (lp.d == scenario.d) {
    if (const auto* irra = std::get_if<IrraFit>(&fit.coefficients)) {
      for (int i = 0; i < scenario.d; ++i)
        m.phi_errors.push_back(linalg::spectral_norm(irra->Phi_hats[static_cast<std::size_t>(i)] -
                                                     scenario.Phis[static_cast<std::size_t>(i)]));
      m.ranks_Phi = phi_block_ranks(*irra, cfg.rel_tol);
    } else {
      m.phi_errors.push_back(linalg::spectral_norm(lp.Phi - scenario.stacked_phi()));
    }
  }
  const Eigen::MatrixXd z_hat = fit.factors.Bc_hat.transpose() * sample.x.series_major();
  const Eigen::MatrixXd z_lag = z_hat.rows() ? lag_matrix(z_hat, 1) : Eigen::MatrixXd(0, scenario.T);
  m.fit_rmse = fit_rmse(scenario, sample, lp, z_lag);
  return m;
}

namespace {

SimScenario study_scenario(const StudyConfig& cfg) {
  if (cfg.replications < 1) throw InvalidArgument("need at least one replication");
  return cfg.kind == DgpKind::Irra ? make_scenario_irra(cfg.p, cfg.N, cfg.r, cfg.T, cfg.seed)
                                   : make_scenario_rrsra(cfg.p, cfg.N, cfg.r, cfg.T, cfg.seed);
}

}  // namespace

std::vector<ReplicationMetrics> simulation_study(const StudyConfig& cfg, int jobs) {
  const SimScenario scenario = study_scenario(cfg);
  return parallel_map<ReplicationMetrics>(static_cast<std::size_t>(cfg.replications), jobs,
                                          [&](std::size_t k) { return run_replication(scenario, cfg, k); });
}

std::vector<ReplicationMetrics> simulation_study_serial(const StudyConfig& cfg) {
  const SimScenario scenario = study_scenario(cfg);
  return serial_map<ReplicationMetrics>(static_cast<std::size_t>(cfg.replications),
                                        [&](std::size_t k) { return run_replication(scenario, cfg, k); });
}

}  // namespace effrank
