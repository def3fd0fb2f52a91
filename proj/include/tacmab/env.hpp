#pragma once

// Ground-truth environment: hidden task parameters, coalition feasibility,
// censored observations and the oracle benchmark.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tacmab/allocation.hpp"
#include "tacmab/errors.hpp"
#include "tacmab/planner.hpp"

namespace tacmab {

struct TaskSpec {
  int tau = 1;     // minimum coalition size that activates the task
  double p = 0.0;  // success probability of an activated execution
  double v = 0.0;  // reward on success

  double mu() const noexcept { return p * v; }
};

struct Instance {
  std::vector<TaskSpec> tasks;
  int team_size = 1;   // M
  long horizon = 1;    // T
  double p_min = 1.0;  // known lower bound on p for feasible tasks

  std::size_t num_tasks() const noexcept { return tasks.size(); }
  bool feasible(std::size_t k) const { return tasks[k].tau <= team_size; }

  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(tasks.size());
    for (const auto& t : tasks) v.push_back(t.v);
    return v;
  }
};

/// Checks per-task invariants and team/horizon positivity. When
/// `require_nontrivial` is set, additionally requires K > M.
inline void validate_instance(const Instance& inst, bool require_nontrivial = true) {
  if (inst.team_size < 1) throw InputError("team size M must be >= 1");
  if (inst.horizon < 1) throw InputError("horizon T must be >= 1");
  if (!(inst.p_min > 0.0 && inst.p_min <= 1.0)) {
    throw InputError("p_min must lie in (0, 1]");
  }
  if (inst.tasks.empty()) throw InputError("instance has no tasks");
  if (require_nontrivial &&
      inst.tasks.size() <= static_cast<std::size_t>(inst.team_size)) {
    throw InputError("instance needs K > M (K=" + std::to_string(inst.tasks.size()) +
                     ", M=" + std::to_string(inst.team_size) + ")");
  }
  for (std::size_t k = 0; k < inst.tasks.size(); ++k) {
    const TaskSpec& t = inst.tasks[k];
    const std::string where = "task " + std::to_string(k) + ": ";
    if (t.tau < 1) throw InputError(where + "tau must be >= 1");
    if (!(t.p >= 0.0 && t.p <= 1.0)) throw InputError(where + "p must lie in [0, 1]");
    if (!(t.v >= 0.0) || std::isinf(t.v)) throw InputError(where + "v must be finite and >= 0");
    if (t.tau <= inst.team_size && t.p < inst.p_min) {
      throw InputError(where + "feasible task violates p >= p_min");
    }
  }
}

struct TaskOutcome {
  double y = 0.0;             // observed reward
  bool activated = false;     // coalition >= tau
  bool success_draw = false;  // hidden X; metrics only
};

struct RoundOutcome {
  std::vector<TaskOutcome> tasks;
};

// ---------------------------------------------------------------------------
// Random streams

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for substream `stream` of a trial seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  std::uint64_t mix = a ^ (stream * 0xD1B54A32D192ED03ULL);
  return splitmix64(mix);
}

/// Uniform double in [0, 1) from the top 53 bits. Portable across standard
/// libraries, unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// One independent generator per task. Every task consumes exactly one draw
/// per round whatever the coalition, so X realizations do not depend on the
/// policy being evaluated.
class TaskStreams {
 public:
  TaskStreams(std::uint64_t trial_seed, std::size_t num_tasks) {
    gens_.reserve(num_tasks);
    for (std::size_t k = 0; k < num_tasks; ++k) {
      gens_.emplace_back(derive_seed(trial_seed, k));
    }
  }

  bool draw(std::size_t k, double p) { return uniform01(gens_.at(k)) < p; }

 private:
  std::vector<std::mt19937_64> gens_;
};

/// Executes one round. `draws.draw(k, p)` is called once per task in index
/// order; censoring is applied afterwards.
template <class DrawSource>
RoundOutcome step(const Instance& inst, const Allocation& alloc, DrawSource& draws) {
  validate_allocation(alloc, inst.num_tasks(), inst.team_size);
  RoundOutcome out;
  out.tasks.resize(inst.num_tasks());
  for (std::size_t k = 0; k < inst.num_tasks(); ++k) {
    const TaskSpec& spec = inst.tasks[k];
    TaskOutcome& o = out.tasks[k];
    o.success_draw = draws.draw(k, spec.p);
    o.activated = alloc[k] >= spec.tau;
    o.y = (o.activated && o.success_draw) ? spec.v : 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracle and regret

struct OracleSolution {
  Allocation allocation;
  double value = 0.0;  // mu*
};

inline OracleSolution oracle_allocation(const Instance& inst) {
  std::vector<KnapsackItem> items;
  for (std::size_t k = 0; k < inst.num_tasks(); ++k) {
    if (inst.feasible(k)) items.push_back({k, inst.tasks[k].tau, inst.tasks[k].mu()});
  }
  Plan plan = solve_knapsack(items, inst.team_size, inst.num_tasks());
  OracleSolution sol;
  sol.allocation = plan.allocation;
  for (std::size_t k : plan.selected) sol.value += inst.tasks[k].mu();
  return sol;
}

/// Expected value of the tasks activated by `alloc`.
inline double expected_reward(const Instance& inst, const Allocation& alloc) {
  double r = 0.0;
  for (std::size_t k = 0; k < inst.num_tasks(); ++k) {
    if (alloc[k] >= inst.tasks[k].tau) r += inst.tasks[k].mu();
  }
  return r;
}

/// mu* minus the expected reward of the activated tasks.
inline double pseudo_regret(const Instance& inst, const Allocation& alloc,
                            double oracle_value) {
  const double gap = oracle_value - expected_reward(inst, alloc);
  return gap > 0.0 ? gap : 0.0;
}

/// mu* minus the realized team reward sum(Y).
inline double realized_regret(const RoundOutcome& outcome, double oracle_value) {
  double reward = 0.0;
  for (const auto& o : outcome.tasks) reward += o.y;
  return oracle_value - reward;
}

}  // namespace tacmab
