// effrank: command-line front end for simulation, fitting, tuning, forecasting
// and Monte Carlo evaluation of effective-cointegration-rank models.
//
// Exit codes: 0 success, 2 usage or parse error, 3 numerical failure.

#include "effrank/error.hpp"
#include "effrank/eval.hpp"
#include "effrank/factors.hpp"
#include "effrank/linalg.hpp"
#include "effrank/panel.hpp"
#include "effrank/parallel.hpp"
#include "effrank/serialize.hpp"
#include "effrank/simulate.hpp"
#include "effrank/tuning.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace effrank;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct DataArgs {
  std::string x_path;
  std::string y_path;
  bool no_header = false;
  bool center_y = false;
};

struct ModelArgs {
  std::string method = "rrsra";
  std::optional<double> lambda_A;
  std::optional<double> lambda_Phi;
  int d = 1;
  int k_bar = 10;
  double delta0 = 0.3;
  std::optional<int> freeze_r;
  bool jacobi = false;
  std::optional<double> irra_weight;
  double outer_tol = 1e-6;
  int max_outer = 500;
};

struct GridArgs {
  std::vector<double> lambda_A;
  std::vector<double> lambda_Phi;
  std::vector<int> d_values;
  int d_max = 3;
  long T1 = 0;
};

void add_data_options(CLI::App* cmd, DataArgs& a) {
  cmd->add_option("--x", a.x_path, "CSV of the I(1) panel x (rows are time points)")->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--y", a.y_path, "CSV of the stationary target panel y")->required()
      ->check(CLI::ExistingFile);
  cmd->add_flag("--no-header", a.no_header, "CSV files have no header row");
  cmd->add_flag("--center", a.center_y, "subtract the column means of y before fitting");
}

void add_model_options(CLI::App* cmd, ModelArgs& a, bool with_method) {
  if (with_method)
    cmd->add_option("--method", a.method, "rrsra or irra")->check(CLI::IsMember({"rrsra", "irra"}));
  cmd->add_option("--lambda-A", a.lambda_A, "nuclear penalty on A (default sqrt((p+N)/T))")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--lambda-Phi", a.lambda_Phi, "penalty on the lag blocks (default sqrt(log p / T))")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--d", a.d, "lag order")->check(CLI::Range(0, 50));
  cmd->add_option("--k-bar", a.k_bar, "largest ACF lag in the trend detector")->check(CLI::PositiveNumber);
  cmd->add_option("--delta0", a.delta0, "trend detector threshold in (0,1)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--freeze-r", a.freeze_r, "use this number of trends instead of detecting it")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--jacobi", a.jacobi, "IRRA: update lag blocks from the previous sweep");
  cmd->add_option("--irra-weight", a.irra_weight, "IRRA: common weight w_i instead of the default")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--outer-tol", a.outer_tol, "relative change that stops the outer loop")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-outer", a.max_outer, "outer iteration cap")->check(CLI::PositiveNumber);
}

void add_grid_options(CLI::App* cmd, GridArgs& g) {
  cmd->add_option("--grid-lambda-A", g.lambda_A, "lambda_A candidates (default 0.25..4 x rate)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-lambda-Phi", g.lambda_Phi, "lambda_Phi candidates (default 0.25..4 x rate)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-d", g.d_values, "lag orders to search (default 0..d-max)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--d-max", g.d_max, "largest lag order in the default grid")->check(CLI::NonNegativeNumber);
  cmd->add_option("--T1", g.T1, "initial training length for the forecast-error criterion")
      ->check(CLI::PositiveNumber);
}

struct Data {
  Panel x;
  Panel y;
};

Data load_data(const DataArgs& a) {
  Panel x = load_csv(a.x_path, !a.no_header);
  Panel y = load_csv(a.y_path, !a.no_header);
  if (x.num_times() != y.num_times())
    throw InvalidArgument("x has " + std::to_string(x.num_times()) + " rows but y has " +
                          std::to_string(y.num_times()));
  if (a.center_y) y = center(y);
  return {std::move(x), std::move(y)};
}

PipelineOptions pipeline_options(const ModelArgs& a) {
  PipelineOptions opts;
  opts.detector = {a.k_bar, a.delta0};
  opts.detector.validate();
  opts.frozen_r = a.freeze_r;
  opts.solver.outer_tol = a.outer_tol;
  opts.solver.max_outer = a.max_outer;
  opts.update = a.jacobi ? BlockUpdate::Jacobi : BlockUpdate::GaussSeidel;
  opts.irra_weight = a.irra_weight;
  return opts;
}

ModelSpec model_spec(const ModelArgs& a, const Data& data) {
  const auto p = static_cast<int>(data.y.num_series());
  const auto N = static_cast<int>(data.x.num_series());
  const auto T = static_cast<int>(data.y.num_times());
  ModelSpec spec = rate_spec(parse_method(a.method), p, N, T, a.d);
  if (a.lambda_A) spec.lambda_A = *a.lambda_A;
  if (a.lambda_Phi) spec.lambda_Phi = *a.lambda_Phi;
  return spec;
}

TuningGrid tuning_grid(const GridArgs& g, const Data& data, Eigen::Index T) {
  const auto p = static_cast<int>(data.y.num_series());
  const auto N = static_cast<int>(data.x.num_series());
  const Eigen::Index T1 = g.T1 > 0 ? g.T1 : static_cast<Eigen::Index>(std::floor(0.8 * static_cast<double>(T)));
  TuningGrid grid = default_grid(p, N, T, T1, g.d_max);
  if (!g.lambda_A.empty()) grid.lambda_A_values = g.lambda_A;
  if (!g.lambda_Phi.empty()) grid.lambda_Phi_values = g.lambda_Phi;
  if (!g.d_values.empty()) grid.d_values = g.d_values;
  grid.validate(T);
  return grid;
}

void emit(const json& doc, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << doc.dump(2) << '\n';
  else
    write_json(doc, out);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string dgp = "rrsra";
  int p = 20, N = 20, r = 3, T = 400;
  std::uint64_t seed = 1;
  std::uint64_t replication = 0;
  std::string out_dir = ".";
};

int cmd_simulate(const SimulateArgs& a) {
  const SimScenario sc = a.dgp == "irra" ? make_scenario_irra(a.p, a.N, a.r, a.T, a.seed)
                                         : make_scenario_rrsra(a.p, a.N, a.r, a.T, a.seed);
  Rng rng = replication_rng(a.seed, a.replication);
  const SimSample s = generate(sc, rng);
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  save_csv(s.x, dir / "x.csv");
  save_csv(s.y, dir / "y.csv");
  json truth = to_json(sc);
  truth["replication"] = a.replication;
  write_json(truth, dir / "truth.json");
  std::cerr << "wrote x.csv (" << s.x.num_times() << " x " << s.x.num_series() << "), y.csv ("
            << s.y.num_times() << " x " << s.y.num_series() << "), truth.json to " << dir.string() << '\n';
  return 0;
}

// --- fit -------------------------------------------------------------------

int cmd_fit(const DataArgs& data_args, const ModelArgs& model_args, double rel_tol, const std::string& out) {
  const Data data = load_data(data_args);
  const ModelSpec spec = model_spec(model_args, data);
  const PipelineFit fit = fit_pipeline(data.x, data.y, spec, pipeline_options(model_args));
  json doc = pipeline_to_json(fit, rel_tol);
  doc["centered"] = data_args.center_y;
  emit(doc, out);
  return 0;
}

// --- tune ------------------------------------------------------------------

int cmd_tune(const DataArgs& data_args, const ModelArgs& model_args, const GridArgs& grid_args, int jobs,
             const std::string& out) {
  const Data data = load_data(data_args);
  const TuningGrid grid = tuning_grid(grid_args, data, data.y.num_times());
  const TuningResult result = select_tuning(data.x, data.y, grid, parse_method(model_args.method),
                                            pipeline_options(model_args), resolve_jobs(jobs));
  json doc = to_json(result);
  doc["T1"] = grid.T1;
  emit(doc, out);
  return 0;
}

// --- forecast --------------------------------------------------------------

struct ForecastArgs {
  std::string method = "rrsra";
  long split = 0;
  bool tune = false;
  bool reselect = false;
  std::string fit_path;
  std::string r2_csv;
  std::string predictions_csv;
};

Panel origin_panel(const Eigen::MatrixXd& values, const std::vector<std::string>& names) {
  return Panel(values, names);
}

int forecast_from_fit(const Data& data, const ForecastArgs& f, const std::string& out) {
  const PipelineFit fit = pipeline_from_json(read_json(f.fit_path));
  const LinearPredictor lp = predictor_of(fit.coefficients);
  if (fit.factors.Bc_hat.rows() != data.x.num_series())
    throw InvalidArgument("x has " + std::to_string(data.x.num_series()) + " series but the fit expects " +
                          std::to_string(fit.factors.Bc_hat.rows()));
  const Eigen::Index T = data.y.num_times();
  Eigen::MatrixXd pred(T, data.y.num_series());
  for (Eigen::Index t = 1; t <= T; ++t) {
    const Eigen::VectorXd z_t = fit.factors.Bc_hat.transpose() * data.x.values().row(t - 1).transpose();
    pred.row(t - 1) = predict_one_step(lp, z_t, data.y.values().topRows(t)).transpose();
  }
  const Panel panel = origin_panel(pred, data.y.names());
  const std::string target = f.predictions_csv.empty() ? out : f.predictions_csv;
  if (target.empty() || target == "-")
    std::cout << format_csv(panel);
  else
    save_csv(panel, target);
  return 0;
}

int cmd_forecast(const DataArgs& data_args, const ModelArgs& model_args, const GridArgs& grid_args,
                 const ForecastArgs& f, int jobs, const std::string& out) {
  const Data data = load_data(data_args);
  if (!f.fit_path.empty()) return forecast_from_fit(data, f, out);

  const Eigen::Index T = data.y.num_times();
  const Eigen::Index split =
      f.split > 0 ? f.split : static_cast<Eigen::Index>(std::floor(0.8 * static_cast<double>(T)));
  ForecastModel model;
  if (f.method == "rrsra") model.kind = ForecastKind::Rrsra;
  else if (f.method == "irra") model.kind = ForecastKind::Irra;
  else if (f.method == "var") model.kind = ForecastKind::NaiveVar;
  else model.kind = ForecastKind::RandomWalk;

  ModelArgs margs = model_args;
  if (model.kind == ForecastKind::Irra) margs.method = "irra";
  model.spec = model_spec(margs, Data{data.x.head(split), data.y.head(split)});
  if (f.tune && (model.kind == ForecastKind::Rrsra || model.kind == ForecastKind::Irra)) {
    GridArgs g = grid_args;
    if (g.T1 == 0) g.T1 = static_cast<long>(std::floor(0.8 * static_cast<double>(split)));
    model.tuning = tuning_grid(g, Data{data.x.head(split), data.y.head(split)}, split);
    model.reselect_each_origin = f.reselect;
  }
  const ForecastReport report =
      run_expanding_window(data.x, data.y, split, model, pipeline_options(margs), resolve_jobs(jobs));
  emit(to_json(report), out);

  if (!f.r2_csv.empty()) {
    std::string text = "origin,r2_oos\n";
    char buf[64];
    for (std::size_t i = 0; i < report.r2.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%ld,%.17g\n", static_cast<long>(report.origins[i]), report.r2[i]);
      text += buf;
    }
    write_text(f.r2_csv, text);
  }
  if (!f.predictions_csv.empty()) save_csv(origin_panel(report.predictions, data.y.names()), f.predictions_csv);
  return 0;
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string values_path;
  bool no_header = false;
  std::string study;
  int p = 20, N = 20, r = 3, T = 400;
  int reps = 100;
  std::uint64_t seed = 1;
  double rel_tol = 1e-2;
  bool factors_only = false;
};

json summarize_column(const std::vector<double>& v) { return to_json(summarize(v)); }

int cmd_eval(const EvalArgs& a, const ModelArgs& model_args, int jobs, const std::string& out) {
  if (!a.values_path.empty()) {
    const Panel values = load_csv(a.values_path, !a.no_header);
    json doc = {{"schema_version", kSchemaVersion}};
    for (Eigen::Index j = 0; j < values.num_series(); ++j) {
      const Eigen::VectorXd col = values.values().col(j);
      doc["columns"][values.names()[static_cast<std::size_t>(j)]] =
          summarize_column(std::vector<double>(col.data(), col.data() + col.size()));
    }
    emit(doc, out);
    return 0;
  }

  StudyConfig cfg;
  cfg.kind = a.study == "irra" ? DgpKind::Irra : DgpKind::Rrsra;
  cfg.p = a.p, cfg.N = a.N, cfg.r = a.r, cfg.T = a.T;
  cfg.seed = a.seed;
  cfg.replications = a.reps;
  cfg.rel_tol = a.rel_tol;
  cfg.fit_coefficients = !a.factors_only;
  cfg.options = pipeline_options(model_args);
  const int d = cfg.kind == DgpKind::Irra ? kSimIrraLags : 1;
  cfg.spec = rate_spec(cfg.kind == DgpKind::Irra ? Method::Irra : Method::Rrsra, a.p, a.N, a.T, d);
  if (model_args.lambda_A) cfg.spec.lambda_A = *model_args.lambda_A;
  if (model_args.lambda_Phi) cfg.spec.lambda_Phi = *model_args.lambda_Phi;

  const auto reps = simulation_study(cfg, resolve_jobs(jobs));
  std::vector<double> r_hat, loading, frmse, a_dist, rank, rmse;
  std::vector<std::vector<double>> phi(static_cast<std::size_t>(d));
  int r_hits = 0, rank_hits = 0;
  for (const auto& m : reps) {
    r_hat.push_back(m.r_hat);
    r_hits += m.r_hat == a.r;
    loading.push_back(m.loading_distance);
    frmse.push_back(m.factor_rmse);
    if (!cfg.fit_coefficients) continue;
    a_dist.push_back(m.a_distance);
    rank.push_back(m.rank_A);
    rank_hits += m.rank_A == kSimRankA;
    rmse.push_back(m.fit_rmse);
    for (std::size_t i = 0; i < m.phi_errors.size() && i < phi.size(); ++i) phi[i].push_back(m.phi_errors[i]);
  }
  const double n = static_cast<double>(reps.size());
  json doc = {{"schema_version", kSchemaVersion},
              {"dgp", a.study},
              {"p", a.p}, {"N", a.N}, {"r", a.r}, {"T", a.T},
              {"seed", a.seed},
              {"replications", a.reps},
              {"spec", {{"lambda_A", cfg.spec.lambda_A}, {"lambda_Phi", cfg.spec.lambda_Phi}, {"d", cfg.spec.d}}},
              {"r_hat_accuracy", r_hits / n},
              {"r_hat", summarize_column(r_hat)},
              {"loading_distance", summarize_column(loading)},
              {"factor_rmse", summarize_column(frmse)}};
  if (cfg.fit_coefficients) {
    doc["a_distance"] = summarize_column(a_dist);
    doc["rank_A"] = summarize_column(rank);
    doc["rank_A_accuracy"] = rank_hits / n;
    doc["fit_rmse"] = summarize_column(rmse);
    json phis = json::array();
    for (const auto& v : phi)
      if (!v.empty()) phis.push_back(summarize_column(v));
    doc["phi_error"] = phis;
  }
  emit(doc, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective cointegration rank: PCA factor extraction with RRSRA/IRRA regression"};
  app.require_subcommand(1);
  int jobs = 0;
  std::string out;
  app.add_option("--jobs", jobs, "worker threads (default: EFFRANK_JOBS, else 1)")->check(CLI::NonNegativeNumber);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic x/y pair with ground truth");
  simulate->add_option("--dgp", sim.dgp, "rrsra (sparse Phi) or irra (low-rank Phi_1, Phi_2)")
      ->check(CLI::IsMember({"rrsra", "irra"}));
  simulate->add_option("--p", sim.p, "target dimension")->check(CLI::PositiveNumber);
  simulate->add_option("--N", sim.N, "panel dimension")->check(CLI::PositiveNumber);
  simulate->add_option("--r", sim.r, "number of common trends")->check(CLI::NonNegativeNumber);
  simulate->add_option("--T", sim.T, "sample length")->check(CLI::Range(2, 10000000));
  simulate->add_option("--seed", sim.seed, "scenario seed");
  simulate->add_option("--replication", sim.replication, "noise stream index");
  simulate->add_option("--out-dir", sim.out_dir, "directory for x.csv, y.csv and truth.json");

  DataArgs data;
  ModelArgs model;
  GridArgs grid;
  double rel_tol = 1e-2;

  auto* fit = app.add_subcommand("fit", "detect trends and fit RRSRA or IRRA; writes fit JSON");
  add_data_options(fit, data);
  add_model_options(fit, model, true);
  fit->add_option("--rel-tol", rel_tol, "relative threshold for rank and support")
      ->check(CLI::Range(0.0, 1.0));
  fit->add_option("--out", out, "output JSON path (default stdout)");

  auto* tune = app.add_subcommand("tune", "grid search of (lambda_A, lambda_Phi, d) by forecast error");
  add_data_options(tune, data);
  add_model_options(tune, model, true);
  add_grid_options(tune, grid);
  tune->add_option("--out", out, "output JSON path (default stdout)");

  ForecastArgs fc;
  auto* forecast = app.add_subcommand("forecast", "expanding-window one-step forecasts and R2_OOS");
  add_data_options(forecast, data);
  add_model_options(forecast, model, false);
  add_grid_options(forecast, grid);
  forecast->add_option("--method", fc.method, "rrsra, irra, var or rw")
      ->check(CLI::IsMember({"rrsra", "irra", "var", "rw"}));
  forecast->add_option("--split", fc.split, "last time point of the initial estimation sample")
      ->check(CLI::PositiveNumber);
  forecast->add_flag("--tune", fc.tune, "select penalties and lag order on data through the split");
  forecast->add_flag("--reselect", fc.reselect, "with --tune, repeat the selection at every origin");
  forecast->add_option("--fit", fc.fit_path, "predict with a saved fit instead of refitting")
      ->check(CLI::ExistingFile);
  forecast->add_option("--r2-csv", fc.r2_csv, "write per-origin R2_OOS values");
  forecast->add_option("--predictions", fc.predictions_csv, "write per-origin predictions");
  forecast->add_option("--out", out, "output path (default stdout)");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "summarize a CSV of values or run a Monte Carlo study");
  auto* values_opt = eval->add_option("--values", ev.values_path, "CSV whose columns are summarized")
                         ->check(CLI::ExistingFile);
  eval->add_flag("--no-header", ev.no_header, "values CSV has no header row");
  auto* study_opt = eval->add_option("--study", ev.study, "simulation design: rrsra or irra")
                        ->check(CLI::IsMember({"rrsra", "irra"}));
  values_opt->excludes(study_opt);
  eval->add_option("--p", ev.p, "target dimension")->check(CLI::PositiveNumber);
  eval->add_option("--N", ev.N, "panel dimension")->check(CLI::PositiveNumber);
  eval->add_option("--r", ev.r, "number of common trends")->check(CLI::NonNegativeNumber);
  eval->add_option("--T", ev.T, "sample length")->check(CLI::Range(2, 10000000));
  eval->add_option("--reps", ev.reps, "replications")->check(CLI::PositiveNumber);
  eval->add_option("--seed", ev.seed, "scenario seed");
  eval->add_option("--rel-tol", ev.rel_tol, "relative threshold for rank and support")
      ->check(CLI::Range(0.0, 1.0));
  eval->add_flag("--factors-only", ev.factors_only, "skip the coefficient fits");
  add_model_options(eval, model, false);
  eval->add_option("--out", out, "output JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*fit) return cmd_fit(data, model, rel_tol, out);
    if (*tune) return cmd_tune(data, model, grid, jobs, out);
    if (*forecast) return cmd_forecast(data, model, grid, fc, jobs, out);
    if (*eval) {
      if (ev.values_path.empty() && ev.study.empty()) {
        std::cerr << "eval: give --values FILE or --study DGP\n";
        return kExitUsage;
      }
      return cmd_eval(ev, model, jobs, out);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error at row " << e.row() << ", column " << e.col() << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Usage ? kExitUsage : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
