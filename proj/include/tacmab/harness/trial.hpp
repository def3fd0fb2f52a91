#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tacmab/baselines.hpp"
#include "tacmab/ctac.hpp"
#include "tacmab/dtac.hpp"
#include "tacmab/env.hpp"
#include "tacmab/harness/config.hpp"

namespace tacmab::harness {

struct RoundRecord {
  double pseudo_regret = 0.0;
  double realized_regret = 0.0;
  double cum_pseudo_regret = 0.0;
  double cum_realized_regret = 0.0;
  long messages = 0;
  long cum_messages = 0;
  SyncType sync = SyncType::kNone;
  Allocation allocation;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct TrialRecord {
  Algorithm algorithm = Algorithm::kOracle;
  std::uint64_t seed = 0;
  std::vector<RoundRecord> rounds;
  double final_pseudo_regret = 0.0;
  double final_realized_regret = 0.0;
  long total_messages = 0;
  long structural_syncs = 0;
  long heartbeat_syncs = 0;
  long warmup_syncs = 0;
  // FNV-1a over every hidden success draw, in (round, task) order.
  std::uint64_t draw_checksum = 0;
  // Learner's reward estimates at the horizon (empty for oracle / ind_ucb).
  std::vector<double> final_mu_hat;
  std::vector<long> final_n;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

namespace detail {

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

class TrialLoop {
 public:
  TrialLoop(const ExperimentConfig& cfg, std::uint64_t seed)
      : inst_(cfg.instance),
        streams_(seed, inst_.num_tasks()),
        oracle_value_(oracle_allocation(inst_).value) {
    record_.algorithm = cfg.algorithm;
    record_.seed = seed;
    record_.draw_checksum = kFnvOffset;
    record_.rounds.reserve(static_cast<std::size_t>(inst_.horizon));
  }

  RoundOutcome play(const Allocation& alloc, long messages, SyncType sync) {
    RoundOutcome out = step(inst_, alloc, streams_);
    for (const TaskOutcome& o : out.tasks) {
      record_.draw_checksum ^= o.success_draw ? 1u : 0u;
      record_.draw_checksum *= kFnvPrime;
    }
    RoundRecord r;
    r.pseudo_regret = pseudo_regret(inst_, alloc, oracle_value_);
    r.realized_regret = realized_regret(out, oracle_value_);
    r.messages = messages;
    r.sync = sync;
    r.allocation = alloc;
    if (!record_.rounds.empty()) {
      const RoundRecord& prev = record_.rounds.back();
      r.cum_pseudo_regret = prev.cum_pseudo_regret;
      r.cum_realized_regret = prev.cum_realized_regret;
      r.cum_messages = prev.cum_messages;
    }
    r.cum_pseudo_regret += r.pseudo_regret;
    r.cum_realized_regret += r.realized_regret;
    r.cum_messages += r.messages;
    record_.rounds.push_back(std::move(r));
    return out;
  }

  TrialRecord finish() {
    if (!record_.rounds.empty()) {
      const RoundRecord& last = record_.rounds.back();
      record_.final_pseudo_regret = last.cum_pseudo_regret;
      record_.final_realized_regret = last.cum_realized_regret;
      record_.total_messages = last.cum_messages;
    }
    return std::move(record_);
  }

  TrialRecord& record() { return record_; }
  const Instance& instance() const { return inst_; }

 private:
  Instance inst_;
  TaskStreams streams_;
  double oracle_value_;
  TrialRecord record_;
};

}  // namespace detail

/// Runs one algorithm for T rounds against a freshly seeded environment.
/// Deterministic in (cfg, seed); the environment's draws depend only on the
/// seed, so different algorithms on the same seed see identical X.
inline TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
  validate_config(cfg);
  detail::TrialLoop loop(cfg, seed);
  const Instance& inst = loop.instance();
  const long horizon = inst.horizon;

  switch (cfg.algorithm) {
    case Algorithm::kOracle: {
      const Allocation alloc = oracle_policy(inst);
      for (long t = 1; t <= horizon; ++t) loop.play(alloc, 0, SyncType::kNone);
      break;
    }
    case Algorithm::kIndUcb: {
      IndependentUcbTeam team(inst, {cfg.c_ucb});
      for (long t = 1; t <= horizon; ++t) {
        const Allocation alloc = team.plan_round(t);
        team.observe(alloc, loop.play(alloc, 0, SyncType::kNone));
      }
      break;
    }
    case Algorithm::kCtac: {
      CtacCoordinator coord(inst, {cfg.effective_n_max(), cfg.c_ucb});
      const long per_round = cfg.effective_ctac_messages();
      for (long t = 1; t <= horizon; ++t) {
        const Allocation alloc = coord.plan_round(t);
        coord.observe(alloc, loop.play(alloc, per_round, SyncType::kNone));
      }
      for (const CtacTaskState& s : coord.state()) {
        loop.record().final_mu_hat.push_back(s.mu_hat());
        loop.record().final_n.push_back(s.n);
      }
      break;
    }
    case Algorithm::kDtac: {
      DtacTeam team(inst, {cfg.effective_n_max(), cfg.c_ucb, cfg.heartbeat, cfg.accounting});
      for (long t = 1; t <= horizon; ++t) {
        const DtacTeam::RoundStart start = team.begin_round(t);
        team.observe(start.allocation, loop.play(start.allocation, start.messages, start.sync));
      }
      TrialRecord& rec = loop.record();
      rec.structural_syncs = team.structural_syncs();
      rec.heartbeat_syncs = team.heartbeat_syncs();
      rec.warmup_syncs = team.warmup_syncs();
      for (const TaskBelief& b : team.agents().front().tasks) {
        rec.final_mu_hat.push_back(b.mu_hat());
        rec.final_n.push_back(b.n());
      }
      break;
    }
  }
  return loop.finish();
}

}  // namespace tacmab::harness
