#pragma once

#include "effrank/eval.hpp"
#include "effrank/factors.hpp"
#include "effrank/irra.hpp"
#include "effrank/rrsra.hpp"
#include "effrank/simulate.hpp"
#include "effrank/tuning.hpp"

#include <json.hpp>

#include <filesystem>

namespace effrank {

inline constexpr int kSchemaVersion = 1;

// Matrices serialize as {"rows": r, "cols": c, "data": [row-major values]}.
// Doubles are written with round-trip precision, so a reloaded fit reproduces
// predictions bit for bit.

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FactorFit& fit);
nlohmann::json to_json(const RrsraFit& fit);
nlohmann::json to_json(const IrraFit& fit);
nlohmann::json to_json(const EffectiveRankReport& report);
nlohmann::json to_json(const MetricSummary& summary);
nlohmann::json to_json(const TuningResult& result);
nlohmann::json to_json(const ForecastReport& report);
nlohmann::json to_json(const SimScenario& scenario);

/// The fit document written by `effrank fit`: schema_version, factor step,
/// coefficient fit, effective-rank report and the configuration echo.
nlohmann::json pipeline_to_json(const PipelineFit& fit, double rel_tol);

FactorFit factor_fit_from_json(const nlohmann::json& j);
RrsraFit rrsra_fit_from_json(const nlohmann::json& j);
IrraFit irra_fit_from_json(const nlohmann::json& j);
PipelineFit pipeline_from_json(const nlohmann::json& j);

std::string method_name(Method m);
Method parse_method(const std::string& name);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace effrank
