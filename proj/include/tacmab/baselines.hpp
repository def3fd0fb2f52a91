#pragma once

#include <cstddef>
#include <vector>

#include "tacmab/env.hpp"
#include "tacmab/planner.hpp"

namespace tacmab {

/// One Independent-UCB agent. Learns from its own reward shares only.
struct IndUcbAgentState {
  int agent_id = 0;
  std::vector<double> share_sum;
  std::vector<long> n;

  IndUcbAgentState() = default;
  IndUcbAgentState(int id, std::size_t num_tasks)
      : agent_id(id), share_sum(num_tasks, 0.0), n(num_tasks, 0) {}

  double mu_hat(std::size_t k) const {
    return n[k] > 0 ? share_sum[k] / static_cast<double>(n[k]) : 0.0;
  }
};

/// argmax of UCB over tasks. Exact ties (including unexplored tasks) go to
/// the first task at or after `agent_id` in cyclic order, so agent 0 breaks
/// ties toward the lowest task id and distinct agents start their sweep of
/// unexplored tasks at distinct offsets.
inline std::size_t ind_ucb_select(const IndUcbAgentState& s, long t,
                                  const std::vector<double>& values, double c_ucb) {
  const std::size_t num_tasks = s.n.size();
  const std::size_t offset = static_cast<std::size_t>(s.agent_id) % num_tasks;
  std::size_t best = offset;
  double best_index = -1.0;
  for (std::size_t j = 0; j < num_tasks; ++j) {
    const std::size_t k = (offset + j) % num_tasks;
    const double idx = ucb_index(s.mu_hat(k), s.n[k], t, values[k], c_ucb);
    if (idx > best_index) {
      best_index = idx;
      best = k;
    }
  }
  return best;
}

inline void ind_ucb_update(IndUcbAgentState& s, std::size_t task, double share) {
  s.n[task] += 1;
  s.share_sum[task] += share;
}

struct IndUcbParams {
  double c_ucb = 2.0;
};

/// M uncoordinated agents. Coalitions emerge only from coincident choices.
class IndependentUcbTeam {
 public:
  IndependentUcbTeam(const Instance& inst, IndUcbParams params)
      : values_(inst.values()), params_(params) {
    for (int i = 0; i < inst.team_size; ++i) agents_.emplace_back(i, inst.num_tasks());
    choice_.resize(agents_.size());
  }

  Allocation plan_round(long t) {
    Allocation alloc(values_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      choice_[i] = ind_ucb_select(agents_[i], t, values_, params_.c_ucb);
      alloc[choice_[i]] += 1;
    }
    return alloc;
  }

  void observe(const Allocation& alloc, const RoundOutcome& outcome) {
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      const std::size_t k = choice_[i];
      const double share = outcome.tasks[k].y / static_cast<double>(alloc[k]);
      ind_ucb_update(agents_[i], k, share);
    }
  }

  const std::vector<IndUcbAgentState>& agents() const noexcept { return agents_; }

 private:
  std::vector<double> values_;
  IndUcbParams params_;
  std::vector<IndUcbAgentState> agents_;
  std::vector<std::size_t> choice_;
};

/// Full-information benchmark: plays the oracle allocation every round.
inline Allocation oracle_policy(const Instance& inst) {
  return oracle_allocation(inst).allocation;
}

}  // namespace tacmab
