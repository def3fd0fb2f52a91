#pragma once

// Decentralized event-triggered coordination. Every agent keeps a local
// belief state and runs a private copy of the centralized planner on it
// (the "virtual coordinator"). Agents stay silent until a structural event
// (feasibility breakthrough or threshold pruning) or a periodic heartbeat
// triggers a full belief exchange; fusion is deterministic, so after every
// sync all agents hold identical beliefs and therefore identical plans.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tacmab/ctac.hpp"
#include "tacmab/env.hpp"
#include "tacmab/errors.hpp"
#include "tacmab/planner.hpp"

namespace tacmab {

// Ordered so that std::max picks the trigger to report.
enum class Trigger { kNone = 0, kTypeII = 1, kTypeI = 2 };

enum class SyncType { kNone, kHeartbeat, kTypeI, kTypeII, kWarmup };

constexpr std::string_view to_string(SyncType s) {
  switch (s) {
    case SyncType::kNone: return "none";
    case SyncType::kHeartbeat: return "heartbeat";
    case SyncType::kTypeI: return "typeI";
    case SyncType::kTypeII: return "typeII";
    case SyncType::kWarmup: return "warmup";
  }
  return "?";
}

constexpr bool is_structural(SyncType s) {
  return s == SyncType::kTypeI || s == SyncType::kTypeII;
}

enum class MessageAccounting { kBroadcast, kUnicast, kAllToAll };

constexpr long messages_per_sync(MessageAccounting a, int team_size) {
  const long m = team_size;
  switch (a) {
    case MessageAccounting::kBroadcast: return m;
    case MessageAccounting::kUnicast: return m * (m - 1);
    case MessageAccounting::kAllToAll: return m * m;
  }
  return m;
}

struct TaskBelief {
  int tau_lo = 1;
  int tau_hi = 1;
  Phase phase = Phase::kSearch;
  int n_fail = 0;
  // Samples pooled by the team at the last sync; identical across agents.
  long base_n = 0;
  double base_sum = 0.0;
  // Own samples since the last sync.
  long delta_n = 0;
  double delta_sum = 0.0;

  long n() const noexcept { return base_n + delta_n; }
  double mu_hat() const noexcept {
    const long total = n();
    return total > 0 ? (base_sum + delta_sum) / static_cast<double>(total) : 0.0;
  }

  friend bool operator==(const TaskBelief&, const TaskBelief&) = default;
};

struct BeliefState {
  int agent_id = 0;
  int team_size = 1;
  std::vector<TaskBelief> tasks;
  std::vector<int> synced_tau_lo;
  std::vector<Phase> synced_phase;
  Plan current_plan;
  Trigger pending = Trigger::kNone;

  static BeliefState initial(int agent_id, std::size_t num_tasks, int team_size) {
    BeliefState b;
    b.agent_id = agent_id;
    b.team_size = team_size;
    TaskBelief prior;
    prior.tau_hi = team_size;
    b.tasks.assign(num_tasks, prior);
    b.synced_tau_lo.assign(num_tasks, 1);
    b.synced_phase.assign(num_tasks, Phase::kSearch);
    b.current_plan.allocation = Allocation(num_tasks);
    return b;
  }

  friend bool operator==(const BeliefState&, const BeliefState&) = default;
};

struct TaskSnapshot {
  int tau_lo = 1;
  int tau_hi = 1;
  Phase phase = Phase::kSearch;
  int n_fail = 0;
  long delta_n = 0;
  double delta_sum = 0.0;
  double mu_hat = 0.0;
  long n = 0;
};

struct SyncMessage {
  int sender_id = 0;
  std::vector<TaskSnapshot> tasks;
};

inline SyncMessage make_message(const BeliefState& b) {
  SyncMessage m;
  m.sender_id = b.agent_id;
  m.tasks.reserve(b.tasks.size());
  for (const TaskBelief& t : b.tasks) {
    m.tasks.push_back({t.tau_lo, t.tau_hi, t.phase, t.n_fail, t.delta_n, t.delta_sum,
                       t.mu_hat(), t.n()});
  }
  return m;
}

/// Agents 0..c_0-1 go to the lowest selected task id, the next c_1 to the
/// next one, and so on. Remaining agents idle (nullopt).
inline std::vector<std::optional<std::size_t>> assign_agents(const Plan& plan,
                                                             int team_size) {
  std::vector<std::optional<std::size_t>> out(static_cast<std::size_t>(team_size));
  std::size_t agent = 0;
  for (std::size_t k = 0; k < plan.allocation.size(); ++k) {
    for (int j = 0; j < plan.allocation[k]; ++j) {
      if (agent >= out.size()) throw InputError("plan allocates more agents than the team has");
      out[agent++] = k;
    }
  }
  return out;
}

/// Folds one own observation into the local belief and raises triggers.
inline void local_update(BeliefState& belief, std::size_t task, int coalition, double y,
                         int n_max) {
  TaskBelief& b = belief.tasks.at(task);
  if (y > 0.0) {
    b.tau_hi = std::min(b.tau_hi, coalition);
    if (coalition < b.tau_lo) b.tau_lo = 1;  // refutation
    b.delta_n += 1;
    b.delta_sum += y;
    if (b.phase != Phase::kMonitor) {
      b.phase = Phase::kMonitor;
      b.n_fail = 0;
    }
    if (coalition < belief.synced_tau_lo[task] ||
        belief.synced_phase[task] == Phase::kInfeasible) {
      belief.pending = std::max(belief.pending, Trigger::kTypeI);
    }
    return;
  }
  if (b.phase == Phase::kMonitor) {
    // A failure at a confirmed-feasible size is a genuine zero sample.
    if (coalition >= b.tau_hi) b.delta_n += 1;
    return;
  }
  if (b.phase == Phase::kSearch && coalition >= b.tau_lo) {
    b.n_fail += 1;
    if (b.n_fail >= n_max) {
      b.tau_lo += 1;
      b.n_fail = 0;
      belief.pending = std::max(belief.pending, Trigger::kTypeII);
      if (b.tau_lo > belief.team_size) b.phase = Phase::kInfeasible;
    }
  }
}

inline bool should_sync(const BeliefState& belief, long t, long heartbeat) {
  return belief.pending != Trigger::kNone || (heartbeat > 0 && t % heartbeat == 0);
}

constexpr int phase_rank(Phase p) {
  switch (p) {
    case Phase::kSearch: return 0;
    case Phase::kInfeasible: return 1;
    case Phase::kMonitor: return 2;
  }
  return 0;
}

/// Local planner: non-infeasible tasks weighted by tau_hi, valued by UCB.
inline Plan plan_from_beliefs(const std::vector<TaskBelief>& tasks,
                              const std::vector<double>& values,
                              const PlanningParams& params) {
  if (values.size() != tasks.size()) throw InputError("values/belief length mismatch");
  std::vector<KnapsackItem> items;
  items.reserve(tasks.size());
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const TaskBelief& b = tasks[k];
    if (b.phase == Phase::kInfeasible) continue;
    items.push_back({k, b.tau_hi, ucb_index(b.mu_hat(), b.n(), params.t, values[k], params.c_ucb)});
  }
  return solve_knapsack(items, params.capacity, tasks.size());
}

/// Conservative fusion of the local belief with one message from every other
/// agent, followed by replanning. Thresholds fuse by max (lower bound) and
/// min (upper bound); phases by MONITOR > INFEASIBLE > SEARCH; reward
/// statistics by adding every party's since-sync samples to the shared base.
/// Parties are folded in sender-id order, so the result does not depend on
/// the order of `peers`.
inline BeliefState fuse(const BeliefState& local, const std::vector<SyncMessage>& peers,
                        const std::vector<double>& values, const PlanningParams& params) {
  const std::size_t num_tasks = local.tasks.size();
  const auto team = static_cast<std::size_t>(local.team_size);
  if (peers.size() + 1 != team) {
    throw InvariantViolation("sync expected " + std::to_string(team - 1) +
                             " peer messages, got " + std::to_string(peers.size()));
  }
  std::vector<SyncMessage> parties;
  parties.reserve(team);
  parties.push_back(make_message(local));
  std::vector<bool> seen(team, false);
  seen[static_cast<std::size_t>(local.agent_id)] = true;
  for (const SyncMessage& m : peers) {
    if (m.sender_id < 0 || static_cast<std::size_t>(m.sender_id) >= team ||
        seen[static_cast<std::size_t>(m.sender_id)]) {
      throw InvariantViolation("sync message from unexpected or duplicate sender " +
                               std::to_string(m.sender_id));
    }
    if (m.tasks.size() != num_tasks) {
      throw InvariantViolation("sync message from agent " + std::to_string(m.sender_id) +
                               " has wrong task count");
    }
    seen[static_cast<std::size_t>(m.sender_id)] = true;
    parties.push_back(m);
  }
  std::sort(parties.begin(), parties.end(),
            [](const SyncMessage& a, const SyncMessage& b) { return a.sender_id < b.sender_id; });

  BeliefState out = local;
  for (std::size_t k = 0; k < num_tasks; ++k) {
    const TaskBelief& mine = local.tasks[k];
    TaskBelief fused;
    fused.base_n = mine.base_n;
    fused.base_sum = mine.base_sum;
    fused.tau_lo = parties.front().tasks[k].tau_lo;
    fused.tau_hi = parties.front().tasks[k].tau_hi;
    fused.phase = parties.front().tasks[k].phase;
    for (const SyncMessage& m : parties) {
      const TaskSnapshot& s = m.tasks[k];
      if (s.n - s.delta_n != mine.base_n) {
        throw InvariantViolation("agent " + std::to_string(m.sender_id) +
                                 " disagrees on the pooled sample base for task " +
                                 std::to_string(k));
      }
      fused.tau_lo = std::max(fused.tau_lo, s.tau_lo);
      fused.tau_hi = std::min(fused.tau_hi, s.tau_hi);
      if (phase_rank(s.phase) > phase_rank(fused.phase)) fused.phase = s.phase;
    }
    for (const SyncMessage& m : parties) {
      const TaskSnapshot& s = m.tasks[k];
      fused.base_n += s.delta_n;
      fused.base_sum += s.delta_sum;
      if (fused.phase == Phase::kSearch && s.tau_lo == fused.tau_lo) {
        fused.n_fail = std::max(fused.n_fail, s.n_fail);
      }
    }
    // A confirmed success at tau_hi outranks failure-derived lower bounds.
    if (fused.phase == Phase::kMonitor && fused.tau_lo > fused.tau_hi) {
      fused.tau_lo = fused.tau_hi;
    }
    out.tasks[k] = fused;
    out.synced_tau_lo[k] = fused.tau_lo;
    out.synced_phase[k] = fused.phase;
  }
  out.pending = Trigger::kNone;
  out.current_plan = plan_from_beliefs(out.tasks, values, params);
  return out;
}

struct DtacParams {
  int n_max = 5;
  double c_ucb = 2.0;
  long heartbeat = 50;
  MessageAccounting accounting = MessageAccounting::kBroadcast;
};

/// The whole team of D-TAC agents for one trial. Drives warmup, sync
/// barriers, sticky plan execution and local updates.
class DtacTeam {
 public:
  DtacTeam(const Instance& inst, DtacParams params)
      : values_(inst.values()),
        num_tasks_(inst.num_tasks()),
        team_size_(inst.team_size),
        params_(params) {
    agents_.reserve(static_cast<std::size_t>(team_size_));
    for (int i = 0; i < team_size_; ++i) {
      BeliefState b = BeliefState::initial(i, num_tasks_, team_size_);
      b.current_plan = plan_from_beliefs(b.tasks, values_, {1, params_.c_ucb, team_size_});
      agents_.push_back(std::move(b));
    }
  }

  struct RoundStart {
    Allocation allocation;
    SyncType sync = SyncType::kNone;
    long messages = 0;
  };

  RoundStart begin_round(long t) {
    RoundStart r;
    const long k = static_cast<long>(num_tasks_);
    if (t <= k) {
      // Warmup: the whole team probes task t.
      r.allocation = Allocation(num_tasks_);
      r.allocation[static_cast<std::size_t>(t - 1)] = team_size_;
      assignment_.assign(static_cast<std::size_t>(team_size_),
                         static_cast<std::size_t>(t - 1));
      return r;
    }
    if (t == k + 1) {
      r.sync = SyncType::kWarmup;
    } else {
      Trigger strongest = Trigger::kNone;
      bool any = false;
      for (const BeliefState& b : agents_) {
        strongest = std::max(strongest, b.pending);
        any = any || should_sync(b, t, params_.heartbeat);
      }
      if (strongest == Trigger::kTypeI) {
        r.sync = SyncType::kTypeI;
      } else if (strongest == Trigger::kTypeII) {
        r.sync = SyncType::kTypeII;
      } else if (any) {
        r.sync = SyncType::kHeartbeat;
      }
    }
    if (r.sync != SyncType::kNone) {
      synchronize(t);
      r.messages = messages_per_sync(params_.accounting, team_size_);
      count_sync(r.sync);
    }

    r.allocation = Allocation(num_tasks_);
    assignment_.assign(static_cast<std::size_t>(team_size_), std::nullopt);
    for (const BeliefState& b : agents_) {
      const auto mine = assign_agents(b.current_plan, team_size_);
      const auto slot = mine[static_cast<std::size_t>(b.agent_id)];
      assignment_[static_cast<std::size_t>(b.agent_id)] = slot;
      if (slot) r.allocation[*slot] += 1;
    }
    return r;
  }

  void observe(const Allocation& alloc, const RoundOutcome& outcome) {
    for (BeliefState& b : agents_) {
      const auto slot = assignment_[static_cast<std::size_t>(b.agent_id)];
      if (!slot) continue;
      local_update(b, *slot, alloc[*slot], outcome.tasks[*slot].y, params_.n_max);
    }
  }

  const std::vector<BeliefState>& agents() const noexcept { return agents_; }
  long structural_syncs() const noexcept { return type1_syncs_ + type2_syncs_; }
  long type1_syncs() const noexcept { return type1_syncs_; }
  long type2_syncs() const noexcept { return type2_syncs_; }
  long heartbeat_syncs() const noexcept { return heartbeat_syncs_; }
  long warmup_syncs() const noexcept { return warmup_syncs_; }
  long structural_bound() const noexcept {
    return 2L * static_cast<long>(num_tasks_) * team_size_;
  }

 private:
  void synchronize(long t) {
    std::vector<SyncMessage> inbox;
    inbox.reserve(agents_.size());
    for (const BeliefState& b : agents_) inbox.push_back(make_message(b));
    const PlanningParams pp{t, params_.c_ucb, team_size_};
    std::vector<BeliefState> next;
    next.reserve(agents_.size());
    for (const BeliefState& b : agents_) {
      std::vector<SyncMessage> peers;
      peers.reserve(inbox.size() - 1);
      for (const SyncMessage& m : inbox) {
        if (m.sender_id != b.agent_id) peers.push_back(m);
      }
      next.push_back(fuse(b, peers, values_, pp));
    }
    agents_ = std::move(next);
    for (const BeliefState& b : agents_) {
      if (b.tasks != agents_.front().tasks || b.current_plan != agents_.front().current_plan ||
          b.synced_tau_lo != agents_.front().synced_tau_lo ||
          b.synced_phase != agents_.front().synced_phase) {
        throw InvariantViolation("agents disagree after sync at round " + std::to_string(t));
      }
    }
  }

  void count_sync(SyncType s) {
    switch (s) {
      case SyncType::kTypeI: ++type1_syncs_; break;
      case SyncType::kTypeII: ++type2_syncs_; break;
      case SyncType::kHeartbeat: ++heartbeat_syncs_; break;
      case SyncType::kWarmup: ++warmup_syncs_; break;
      case SyncType::kNone: break;
    }
    if (structural_syncs() > structural_bound()) {
      throw InvariantViolation("structural syncs " + std::to_string(structural_syncs()) +
                               " exceed 2KM = " + std::to_string(structural_bound()));
    }
  }

  std::vector<double> values_;
  std::size_t num_tasks_;
  int team_size_;
  DtacParams params_;
  std::vector<BeliefState> agents_;
  std::vector<std::optional<std::size_t>> assignment_;
  long type1_syncs_ = 0;
  long type2_syncs_ = 0;
  long heartbeat_syncs_ = 0;
  long warmup_syncs_ = 0;
};

}  // namespace tacmab
