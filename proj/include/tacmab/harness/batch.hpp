#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tacmab/harness/config.hpp"
#include "tacmab/harness/trial.hpp"

namespace tacmab::harness {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Mean and standard error (sample sd / sqrt(n)); se = 0 when n == 1.
inline MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / n;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

struct StatRow {
  long round = 0;
  double mean_cum_pseudo = 0.0;
  double se_pseudo = 0.0;
  double mean_cum_realized = 0.0;
  double se_realized = 0.0;
  double mean_cum_messages = 0.0;
};

struct AggregateStats {
  std::string label;
  int n_seeds = 0;
  std::vector<StatRow> rows;
  MeanSe final_pseudo;
  MeanSe final_realized;
  double mean_total_messages = 0.0;
  double mean_structural_syncs = 0.0;
  long max_structural_syncs = 0;
};

/// Aggregates trials round by round. Records are folded in the order given;
/// run_batch passes them sorted by seed.
inline AggregateStats aggregate(const std::vector<TrialRecord>& records, std::string label) {
  AggregateStats st;
  st.label = std::move(label);
  st.n_seeds = static_cast<int>(records.size());
  if (records.empty()) return st;
  const std::size_t horizon = records.front().rounds.size();
  st.rows.resize(horizon);
  std::vector<double> pseudo(records.size()), realized(records.size());
  for (std::size_t t = 0; t < horizon; ++t) {
    double msgs = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const RoundRecord& r = records[i].rounds.at(t);
      pseudo[i] = r.cum_pseudo_regret;
      realized[i] = r.cum_realized_regret;
      msgs += static_cast<double>(r.cum_messages);
    }
    const MeanSe p = mean_se(pseudo);
    const MeanSe q = mean_se(realized);
    st.rows[t] = {static_cast<long>(t + 1), p.mean, p.se, q.mean, q.se,
                  msgs / static_cast<double>(records.size())};
  }
  std::vector<double> fp, fr;
  double msgs = 0.0, syncs = 0.0;
  for (const TrialRecord& r : records) {
    fp.push_back(r.final_pseudo_regret);
    fr.push_back(r.final_realized_regret);
    msgs += static_cast<double>(r.total_messages);
    syncs += static_cast<double>(r.structural_syncs);
    st.max_structural_syncs = std::max(st.max_structural_syncs, r.structural_syncs);
  }
  st.final_pseudo = mean_se(fp);
  st.final_realized = mean_se(fr);
  st.mean_total_messages = msgs / static_cast<double>(records.size());
  st.mean_structural_syncs = syncs / static_cast<double>(records.size());
  return st;
}

struct BatchResult {
  AggregateStats stats;
  std::vector<TrialRecord> records;
};

/// Runs seeds base_seed .. base_seed + n_seeds - 1.
inline BatchResult run_batch(const ExperimentConfig& cfg) {
  validate_config(cfg);
  BatchResult out;
  out.records.reserve(static_cast<std::size_t>(cfg.n_seeds));
  for (int i = 0; i < cfg.n_seeds; ++i) {
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(i);
    try {
      out.records.push_back(run_trial(cfg, seed));
    } catch (const InvariantViolation& e) {
      throw InvariantViolation("seed " + std::to_string(seed) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("seed " + std::to_string(seed) + ": " + e.what());
    }
  }
  out.stats = aggregate(out.records, std::string(to_string(cfg.algorithm)));
  return out;
}

/// Copies the canonical-style instance with every feasible threshold capped
/// at tau_max; infeasible decoys are left untouched.
inline Instance cap_feasible_thresholds(const Instance& base, int tau_max) {
  Instance inst = base;
  for (TaskSpec& t : inst.tasks) {
    if (t.tau <= inst.team_size && t.tau > tau_max) t.tau = tau_max;
  }
  return inst;
}

struct SweepRow {
  int tau_max = 0;
  Algorithm algorithm = Algorithm::kOracle;
  MeanSe final_regret;
  double mean_total_messages = 0.0;
};

/// Final-regret table over tau_max for every algorithm.
inline std::vector<SweepRow> sweep_tau(const ExperimentConfig& base) {
  validate_config(base);
  std::vector<SweepRow> rows;
  for (int tau_max : base.sweep_tau_max) {
    for (Algorithm a : kAllAlgorithms) {
      ExperimentConfig cfg = base;
      cfg.instance = cap_feasible_thresholds(base.instance, tau_max);
      cfg.algorithm = a;
      BatchResult b = run_batch(cfg);
      rows.push_back({tau_max, a, b.stats.final_pseudo, b.stats.mean_total_messages});
    }
  }
  return rows;
}

}  // namespace tacmab::harness
