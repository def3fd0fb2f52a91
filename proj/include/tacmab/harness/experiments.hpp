#pragma once

#include <string>
#include <vector>

#include "tacmab/harness/batch.hpp"
#include "tacmab/harness/config.hpp"

namespace tacmab::harness {

/// Aggregate statistics for every algorithm on the same instance and seeds.
/// Trial records are dropped after aggregation.
inline std::vector<AggregateStats> compare_algorithms(const ExperimentConfig& base) {
  std::vector<AggregateStats> out;
  for (Algorithm a : kAllAlgorithms) {
    ExperimentConfig cfg = base;
    cfg.algorithm = a;
    out.push_back(run_batch(cfg).stats);
  }
  return out;
}

/// mean R(t_hi) / mean R(t_lo) of cumulative pseudo-regret (1-based rounds).
inline double growth_ratio(const AggregateStats& s, long t_lo, long t_hi) {
  const double lo = s.rows.at(static_cast<std::size_t>(t_lo - 1)).mean_cum_pseudo;
  const double hi = s.rows.at(static_cast<std::size_t>(t_hi - 1)).mean_cum_pseudo;
  return hi / lo;
}

}  // namespace tacmab::harness
