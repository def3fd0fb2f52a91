#pragma once

// Centralized coordinator: per-task SEARCH / MONITOR / INFEASIBLE phase
// machine with a failure budget for linear threshold pruning and an exact
// UCB-indexed knapsack planner.

#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

#include "tacmab/env.hpp"
#include "tacmab/errors.hpp"
#include "tacmab/planner.hpp"

namespace tacmab {

enum class Phase { kSearch, kMonitor, kInfeasible };

constexpr std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kSearch: return "SEARCH";
    case Phase::kMonitor: return "MONITOR";
    case Phase::kInfeasible: return "INFEASIBLE";
  }
  return "?";
}

/// Failure budget ceil(2 ln T / ln(1 / (1 - p_min))), floored at 1.
inline int theoretical_nmax(long horizon, double p_min) {
  if (horizon < 1) throw InputError("horizon must be >= 1");
  if (!(p_min > 0.0 && p_min <= 1.0)) throw InputError("p_min must lie in (0, 1]");
  if (p_min >= 1.0) return 1;
  const double budget = std::ceil(2.0 * std::log(static_cast<double>(horizon)) /
                                  std::log(1.0 / (1.0 - p_min)));
  return budget < 1.0 ? 1 : static_cast<int>(budget);
}

struct CtacTaskState {
  int tau_hat = 1;
  Phase phase = Phase::kSearch;
  int n_fail = 0;
  long n = 0;             // feasible executions counted in the estimate
  double reward_sum = 0;  // sum of y over those executions

  double mu_hat() const noexcept { return n > 0 ? reward_sum / static_cast<double>(n) : 0.0; }

  friend bool operator==(const CtacTaskState&, const CtacTaskState&) = default;
};

struct PlanningParams {
  long t = 1;
  double c_ucb = 2.0;
  int capacity = 1;
};

inline Plan select_plan(const std::vector<CtacTaskState>& state,
                        const std::vector<double>& values,
                        const PlanningParams& params) {
  if (values.size() != state.size()) throw InputError("values/state length mismatch");
  std::vector<KnapsackItem> items;
  items.reserve(state.size());
  for (std::size_t k = 0; k < state.size(); ++k) {
    const CtacTaskState& s = state[k];
    if (s.phase == Phase::kInfeasible) continue;
    items.push_back({k, s.tau_hat,
                     ucb_index(s.mu_hat(), s.n, params.t, values[k], params.c_ucb)});
  }
  return solve_knapsack(items, params.capacity, state.size());
}

/// Applies one observation. Callers only invoke this when the coalition met
/// the current hypothesis (coalition >= tau_hat).
inline CtacTaskState update_task(CtacTaskState s, int coalition, double y, int n_max,
                                 int team_size) {
  (void)coalition;
  switch (s.phase) {
    case Phase::kSearch:
      if (y > 0.0) {
        s.phase = Phase::kMonitor;
        s.n_fail = 0;
        s.n += 1;
        s.reward_sum += y;
      } else {
        s.n_fail += 1;
        if (s.n_fail >= n_max) {
          s.tau_hat += 1;
          s.n_fail = 0;
          if (s.tau_hat > team_size) s.phase = Phase::kInfeasible;
        }
      }
      break;
    case Phase::kMonitor:
      s.n += 1;
      s.reward_sum += y;
      break;
    case Phase::kInfeasible:
      break;
  }
  return s;
}

struct CtacParams {
  int n_max = 5;
  double c_ucb = 2.0;
};

class CtacCoordinator {
 public:
  CtacCoordinator(const Instance& inst, CtacParams params)
      : values_(inst.values()),
        team_size_(inst.team_size),
        params_(params),
        state_(inst.num_tasks()) {}

  Allocation plan_round(long t) const {
    return select_plan(state_, values_, {t, params_.c_ucb, team_size_}).allocation;
  }

  void observe(const Allocation& alloc, const RoundOutcome& outcome) {
    for (std::size_t k = 0; k < state_.size(); ++k) {
      const int c = alloc[k];
      if (c == 0 || c < state_[k].tau_hat) continue;
      state_[k] = update_task(state_[k], c, outcome.tasks[k].y, params_.n_max, team_size_);
    }
  }

  const std::vector<CtacTaskState>& state() const noexcept { return state_; }

 private:
  std::vector<double> values_;
  int team_size_;
  CtacParams params_;
  std::vector<CtacTaskState> state_;
};

}  // namespace tacmab
