#pragma once

// Index-parallel kernels for the embarrassingly parallel loops (Monte Carlo
// replications, tuning-grid points, forecast origins). Every parallel kernel
// has a serial twin with identical semantics; the tests check they agree
// bit-for-bit and the benchmark compares their wall time.

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace effrank {

/// requested > 0 wins; otherwise EFFRANK_JOBS; otherwise 1.
int resolve_jobs(int requested = 0);

/// Threads OpenMP would use if asked for everything (1 without OpenMP).
int hardware_jobs();

template <class Fn>
void serial_for(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

/// fn(i) for i in [0, n) on up to `jobs` threads. Iterations must write only
/// to their own slot. The exception from the lowest failing index is rethrown
/// after the loop, matching what serial_for would have thrown first.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    serial_for(n, fn);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <class R, class Fn>
std::vector<R> serial_map(std::size_t n, Fn&& fn) {
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

/// Results are stored by index, so the output never depends on scheduling.
template <class R, class Fn>
std::vector<R> parallel_map(std::size_t n, int jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) return serial_map<R>(n, fn);
  std::vector<R> out(n);
  parallel_for(n, jobs, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace effrank
