#include "effrank/error.hpp"
#include "effrank/eval.hpp"
#include "effrank/parallel.hpp"
#include "effrank/simulate.hpp"
#include "effrank/tuning.hpp"

#include <doctest.h>

#include <cstdlib>
#include <stdexcept>

using namespace effrank;

TEST_CASE("resolve_jobs") {
  CHECK(resolve_jobs(3) == 3);
  ::setenv("EFFRANK_JOBS", "5", 1);
  CHECK(resolve_jobs(0) == 5);
  CHECK(resolve_jobs(2) == 2);
  ::setenv("EFFRANK_JOBS", "garbage", 1);
  CHECK(resolve_jobs(0) == 1);
  ::unsetenv("EFFRANK_JOBS");
  CHECK(resolve_jobs(0) == 1);
  CHECK(hardware_jobs() >= 1);
}

TEST_CASE("parallel_map matches serial_map") {
  auto fn = [](std::size_t i) {
    Rng rng(7, i);
    double s = 0.0;
    for (int k = 0; k < 100; ++k) s += rng.normal();
    return s;
  };
  CHECK(parallel_map<double>(64, 4, fn) == serial_map<double>(64, fn));
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  auto fn = [](std::size_t i) {
    if (i == 5 || i == 9) throw std::runtime_error("index " + std::to_string(i));
  };
  try {
    parallel_for(16, 4, fn);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "index 5");
  }
}

TEST_CASE("replication loop is identical in serial and parallel") {
  const SimScenario sc = make_scenario_rrsra(20, 20, 3, 200, 33);
  auto rep = [&](std::size_t k) {
    Rng rng = replication_rng(33, k);
    const SimSample s = generate(sc, rng);
    return fit_factors(s.x, {}).r_hat * 1000.0 + s.y.values().sum();
  };
  CHECK(parallel_map<double>(8, 3, rep) == serial_map<double>(8, rep));
}

TEST_CASE("tuning and forecasting are identical in serial and parallel") {
  const SimScenario sc = make_scenario_rrsra(6, 8, 2, 60, 34);
  Rng rng = replication_rng(34, 0);
  const SimSample s = generate(sc, rng);
  PipelineOptions opts;
  opts.frozen_r = 2;
  const TuningGrid grid{{0.05, 0.2}, {0.05, 0.2}, {0, 1}, 50};
  const auto par = select_tuning(s.x, s.y, grid, Method::Rrsra, opts, 3);
  const auto ser = select_tuning_serial(s.x, s.y, grid, Method::Rrsra, opts);
  CHECK(par.fe_surface == ser.fe_surface);
  CHECK(par.best_fe == ser.best_fe);

  ForecastModel model;
  model.kind = ForecastKind::Irra;
  model.spec = {Method::Irra, 0.05, 0.05, 1};
  const auto a = run_expanding_window(s.x, s.y, 50, model, opts, 3);
  const auto b = run_expanding_window_serial(s.x, s.y, 50, model, opts);
  CHECK(a.r2 == b.r2);
  CHECK(a.origins == b.origins);
}
