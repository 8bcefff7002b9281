#include <cmath>

#include "treeca/dynamics.hpp"
#include "treeca/error.hpp"
#include "treeca/kernels.hpp"

namespace treeca {

TrajectoryStats trajectory_set(const LocalRule& rule, int observation_depth, int steps, const Budget& budget) {
  if (observation_depth < 1 || steps < 1) throw InvalidInput("trajectory needs n >= 1 and t >= 1");
  TrajectoryStats stats;
  stats.observation_depth = observation_depth;
  stats.steps = steps;
  for (int t = 1; t <= steps; ++t) {
    const auto count = parallel::trajectory_count(rule, observation_depth, t, budget);
    stats.counts.push_back(count);
    stats.entropy_estimates.push_back(std::log(static_cast<double>(count)) / t);
  }
  stats.distinct_count = stats.counts.back();
  return stats;
}

}  // namespace treeca
