#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "star/rng.hpp"
#include "star/scheduler.hpp"

namespace star {

/// Per-trial seeds derive from (master, topology index, trial index), so
/// trial i is reproducible regardless of how many trials run.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t topo_index,
                                std::uint64_t trial) {
  return derive_seed(derive_seed(master, topo_index), trial);
}

struct TrialStats {
  std::vector<std::uint64_t> t_clocks;
  int deadlocks = 0;

  double mean() const {
    if (t_clocks.empty()) return 0.0;
    double s = 0.0;
    for (auto t : t_clocks) s += static_cast<double>(t);
    return s / static_cast<double>(t_clocks.size());
  }
  double stddev() const {
    if (t_clocks.size() < 2) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (auto t : t_clocks) {
      const double d = static_cast<double>(t) - m;
      s += d * d;
    }
    return std::sqrt(s / static_cast<double>(t_clocks.size() - 1));
  }
};

inline TrialStats run_trials(const Circuit& circuit, const Topology& topo,
                             const RunConfig& config, std::uint64_t master_seed,
                             std::uint64_t topo_index, int trials) {
  TrialStats stats;
  stats.t_clocks.reserve(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    SimResult r = run(circuit, topo, config,
                      trial_seed(master_seed, topo_index, static_cast<std::uint64_t>(i)));
    if (r.deadlocked) ++stats.deadlocks;
    stats.t_clocks.push_back(r.t_clock);
  }
  return stats;
}

}  // namespace star
