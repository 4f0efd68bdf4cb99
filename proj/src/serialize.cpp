#include "effrank/serialize.hpp"

#include "effrank/error.hpp"

#include <fstream>

namespace effrank {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw InvalidArgument("matrix JSON has inconsistent dimensions");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = data[static_cast<std::size_t>(i * cols + k)].get<double>();
  return m;
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

json spec_to_json(const ModelSpec& s) {
  return {{"method", method_name(s.method)}, {"lambda_A", s.lambda_A}, {"lambda_Phi", s.lambda_Phi}, {"d", s.d}};
}

ModelSpec spec_from_json(const json& j) {
  return {parse_method(j.at("method").get<std::string>()), j.at("lambda_A").get<double>(),
          j.at("lambda_Phi").get<double>(), j.at("d").get<int>()};
}

}  // namespace

std::string method_name(Method m) { return m == Method::Irra ? "irra" : "rrsra"; }

Method parse_method(const std::string& name) {
  if (name == "rrsra") return Method::Rrsra;
  if (name == "irra") return Method::Irra;
  throw InvalidArgument("unknown method '" + name + "'");
}

json to_json(const FactorFit& fit) {
  return {{"r_hat", fit.r_hat},
          {"eigenvalues", vector_to_json(fit.eigenvalues)},
          {"B_hat", matrix_to_json(fit.B_hat)},
          {"Bc_hat", matrix_to_json(fit.Bc_hat)}};
}

FactorFit factor_fit_from_json(const json& j) {
  FactorFit fit;
  fit.r_hat = j.at("r_hat").get<int>();
  fit.eigenvalues = vector_from_json(j.at("eigenvalues"));
  fit.B_hat = matrix_from_json(j.at("B_hat"));
  fit.Bc_hat = matrix_from_json(j.at("Bc_hat"));
  return fit;
}

json to_json(const RrsraFit& fit) {
  return {{"method", "rrsra"},
          {"A_hat", matrix_to_json(fit.A_hat)},
          {"Phi_hat", matrix_to_json(fit.Phi_hat)},
          {"lambda_A", fit.lambda_A},
          {"lambda_Phi", fit.lambda_Phi},
          {"d", fit.d},
          {"objective_trace", fit.objective_trace},
          {"iterations", fit.iterations},
          {"converged", fit.converged}};
}

RrsraFit rrsra_fit_from_json(const json& j) {
  RrsraFit fit;
  fit.A_hat = matrix_from_json(j.at("A_hat"));
  fit.Phi_hat = matrix_from_json(j.at("Phi_hat"));
  fit.lambda_A = j.at("lambda_A").get<double>();
  fit.lambda_Phi = j.at("lambda_Phi").get<double>();
  fit.d = j.at("d").get<int>();
  fit.objective_trace = j.at("objective_trace").get<std::vector<double>>();
  fit.iterations = j.at("iterations").get<int>();
  fit.converged = j.at("converged").get<bool>();
  return fit;
}

json to_json(const IrraFit& fit) {
  json blocks = json::array();
  for (const auto& b : fit.Phi_hats) blocks.push_back(matrix_to_json(b));
  return {{"method", "irra"},
          {"A_hat", matrix_to_json(fit.A_hat)},
          {"Phi_hats", std::move(blocks)},
          {"lambda_A", fit.lambda_A},
          {"lambda_Phi", fit.lambda_Phi},
          {"weights", fit.weights},
          {"d", fit.d()},
          {"update", fit.update == BlockUpdate::Jacobi ? "jacobi" : "gauss-seidel"},
          {"objective_trace", fit.objective_trace},
          {"iterations", fit.iterations},
          {"converged", fit.converged}};
}

IrraFit irra_fit_from_json(const json& j) {
  IrraFit fit;
  fit.A_hat = matrix_from_json(j.at("A_hat"));
  for (const auto& b : j.at("Phi_hats")) fit.Phi_hats.push_back(matrix_from_json(b));
  fit.lambda_A = j.at("lambda_A").get<double>();
  fit.lambda_Phi = j.at("lambda_Phi").get<double>();
  fit.weights = j.at("weights").get<std::vector<double>>();
  fit.update = j.at("update").get<std::string>() == "jacobi" ? BlockUpdate::Jacobi : BlockUpdate::GaussSeidel;
  fit.objective_trace = j.at("objective_trace").get<std::vector<double>>();
  fit.iterations = j.at("iterations").get<int>();
  fit.converged = j.at("converged").get<bool>();
  return fit;
}

json to_json(const EffectiveRankReport& report) {
  json support = json::array();
  for (const auto& [i, k] : report.support_Phi) support.push_back({i, k});
  return {{"rank_A", report.rank_A},
          {"singular_values", vector_to_json(report.singular_values)},
          {"support_Phi", std::move(support)},
          {"cardinality", report.cardinality}};
}

json to_json(const MetricSummary& s) {
  return {{"count", s.count()}, {"mean", s.mean}, {"std", s.std},       {"min", s.min},
          {"q25", s.q25},       {"median", s.median}, {"q75", s.q75},   {"max", s.max},
          {"values", s.values}};
}

json to_json(const TuningResult& result) {
  json surface = json::array();
  for (const auto& [key, fe] : result.fe_surface) {
    const auto& [la, lp, d] = key;
    surface.push_back({{"lambda_A", la}, {"lambda_Phi", lp}, {"d", d}, {"fe", fe}});
  }
  return {{"schema_version", kSchemaVersion},
          {"best", spec_to_json(result.best)},
          {"best_fe", result.best_fe},
          {"fe_surface", std::move(surface)}};
}

json to_json(const ForecastReport& report) {
  json specs = json::array();
  for (const auto& s : report.specs) specs.push_back(spec_to_json(s));
  return {{"schema_version", kSchemaVersion},
          {"model", report.model},
          {"origins", report.origins},
          {"r2_oos", report.r2},
          {"summary", to_json(report.summary)},
          {"specs", std::move(specs)},
          {"underdetermined", report.underdetermined}};
}

json to_json(const SimScenario& s) {
  json phis = json::array();
  for (const auto& m : s.Phis) phis.push_back(matrix_to_json(m));
  json support = json::array();
  for (const auto& [i, k] : s.support_Phi) support.push_back({i, k});
  return {{"schema_version", kSchemaVersion},
          {"dgp", s.kind == DgpKind::Irra ? "irra" : "rrsra"},
          {"p", s.p},
          {"N", s.N},
          {"r", s.r},
          {"T", s.T},
          {"d", s.d},
          {"seed", s.seed},
          {"rank_A", s.rank_A},
          {"support_Phi", std::move(support)},
          {"ranks_Phi", s.ranks_Phi},
          {"stationarity_scale", s.stationarity_scale},
          {"B", matrix_to_json(s.B)},
          {"Bc", matrix_to_json(s.Bc)},
          {"A", matrix_to_json(s.A)},
          {"Phis", std::move(phis)}};
}

json pipeline_to_json(const PipelineFit& fit, double rel_tol) {
  json coefficients = std::visit([](const auto& f) { return to_json(f); }, fit.coefficients);
  const auto report = std::visit([rel_tol](const auto& f) { return effective_rank(f, rel_tol); },
                                 fit.coefficients);
  json out = {{"schema_version", kSchemaVersion},
              {"spec", spec_to_json(fit.spec)},
              {"r_hat", fit.factors.r_hat},
              {"factors", to_json(fit.factors)},
              {"coefficients", std::move(coefficients)},
              {"effective_rank", to_json(report)},
              {"rel_tol", rel_tol}};
  if (const auto* irra = std::get_if<IrraFit>(&fit.coefficients))
    out["phi_block_ranks"] = phi_block_ranks(*irra, rel_tol);
  return out;
}

PipelineFit pipeline_from_json(const json& j) {
  if (j.at("schema_version").get<int>() != kSchemaVersion)
    throw InvalidArgument("unsupported fit schema version");
  PipelineFit fit;
  fit.spec = spec_from_json(j.at("spec"));
  fit.factors = factor_fit_from_json(j.at("factors"));
  const auto& c = j.at("coefficients");
  if (c.at("method").get<std::string>() == "irra")
    fit.coefficients = irra_fit_from_json(c);
  else
    fit.coefficients = rrsra_fit_from_json(c);
  return fit;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace effrank
