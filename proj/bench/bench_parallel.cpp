#include "effrank/eval.hpp"
#include "effrank/parallel.hpp"
#include "effrank/simulate.hpp"
#include "effrank/tuning.hpp"

#include <benchmark/benchmark.h>

using namespace effrank;

namespace {

// Each kernel runs serially (Arg 0) or on the OpenMP team (Arg > 0 threads).

StudyConfig study_config() {
  StudyConfig cfg;
  cfg.p = 20;
  cfg.N = 20;
  cfg.T = 400;
  cfg.replications = 16;
  cfg.spec = rate_spec(Method::Rrsra, 20, 20, 400, 1);
  return cfg;
}

const SimSample& sample() {
  static const SimSample s = [] {
    const SimScenario sc = make_scenario_rrsra(20, 20, 3, 300, 3);
    Rng rng = replication_rng(3, 0);
    return generate(sc, rng);
  }();
  return s;
}

void BM_Replications(benchmark::State& state) {
  const StudyConfig cfg = study_config();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto out = jobs == 0 ? simulation_study_serial(cfg) : simulation_study(cfg, jobs);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * cfg.replications);
}

void BM_TuningGrid(benchmark::State& state) {
  const SimSample& s = sample();
  TuningGrid grid = default_grid(20, 20, 300, 280, 1);
  grid.lambda_A_values.resize(3);
  grid.lambda_Phi_values.resize(3);
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const TuningResult r = jobs == 0 ? select_tuning_serial(s.x, s.y, grid, Method::Rrsra)
                                     : select_tuning(s.x, s.y, grid, Method::Rrsra, {}, jobs);
    benchmark::DoNotOptimize(r.best_fe);
  }
}

void BM_ExpandingWindow(benchmark::State& state) {
  const SimSample& s = sample();
  ForecastModel model;
  model.kind = ForecastKind::Rrsra;
  model.spec = rate_spec(Method::Rrsra, 20, 20, 240, 1);
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const ForecastReport r = jobs == 0 ? run_expanding_window_serial(s.x, s.y, 240, model)
                                       : run_expanding_window(s.x, s.y, 240, model, {}, jobs);
    benchmark::DoNotOptimize(r.summary.mean);
  }
  state.SetItemsProcessed(state.iterations() * 60);
}

void thread_args(benchmark::internal::Benchmark* b) {
  b->Arg(0);
  for (int j = 1; j <= hardware_jobs(); j *= 2) b->Arg(j);
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_Replications)->Apply(thread_args);
BENCHMARK(BM_TuningGrid)->Apply(thread_args);
BENCHMARK(BM_ExpandingWindow)->Apply(thread_args);

BENCHMARK_MAIN();
