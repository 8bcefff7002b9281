#pragma once

// Enumeration kernels. `parallel::` versions are OpenMP data-parallel loops whose results
// are independent of the thread count; `serial::` versions are the plain single-threaded
// reference implementations they are tested and benchmarked against.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "treeca/budget.hpp"
#include "treeca/rule.hpp"

namespace treeca {

/// Thread count used by the parallel kernels (defaults to OpenMP's).
int worker_threads() noexcept;
void set_worker_threads(int n) noexcept;

/// Evaluates f(i) into out[i] for every i, spread over the workers.
template <class F>
void parallel_fill(std::span<std::uint64_t> out, F&& f) {
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static) num_threads(worker_threads())
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(static_cast<std::uint64_t>(i));
}

/// As above, with a per-thread copy of `prototype` passed to f as scratch space.
template <class State, class F>
void parallel_fill(std::span<std::uint64_t> out, const State& prototype, F&& f) {
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel num_threads(worker_threads())
  {
    State local = prototype;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(local, static_cast<std::uint64_t>(i));
  }
}

/// Computes values for [0, count) in parallel chunks and hands them to `consume` in index
/// order, so order-sensitive reductions stay deterministic.
template <class State, class Compute, class Consume>
void for_each_ordered(std::uint64_t count, const State& prototype, Compute&& compute, Consume&& consume,
                      std::uint64_t chunk = std::uint64_t{1} << 20) {
  std::vector<std::uint64_t> buffer;
  for (std::uint64_t start = 0; start < count; start += chunk) {
    const auto len = std::min(chunk, count - start);
    buffer.resize(len);
    parallel_fill(std::span<std::uint64_t>(buffer), prototype,
                  [&](State& st, std::uint64_t i) { return compute(st, start + i); });
    for (std::uint64_t i = 0; i < len; ++i) consume(start + i, buffer[i]);
  }
}

namespace parallel {

/// counts[key(q)] = |μ^{-1}(q)| for every block q of depth `level`, obtained by applying
/// the rule to every block of depth level + r.
std::vector<std::uint64_t> image_histogram(const LocalRule& rule, int level, const Budget& budget);

/// |P(τ, n, t)| by recursion on subtrees; see trajectory_set.
std::uint64_t trajectory_count(const LocalRule& rule, int observation_depth, int steps, const Budget& budget);

}  // namespace parallel

namespace serial {

std::vector<std::uint64_t> image_histogram(const LocalRule& rule, int level, const Budget& budget);

/// |P(τ, n, t)| straight from the definition: every base block of depth n + (t-1)·r.
std::uint64_t trajectory_count(const LocalRule& rule, int observation_depth, int steps, const Budget& budget);

}  // namespace serial

}  // namespace treeca
