#pragma once

// Exact 0/1 knapsack over integer coalition weights, plus the UCB1 index used
// as item value. Shared by the oracle, the centralized coordinator and every
// decentralized agent's local planner, so it must be fully deterministic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "tacmab/allocation.hpp"
#include "tacmab/errors.hpp"

namespace tacmab {

inline constexpr double kUnexplored = std::numeric_limits<double>::infinity();

inline bool is_unexplored(double value) noexcept { return std::isinf(value) && value > 0; }

struct KnapsackItem {
  std::size_t task_id = 0;
  int weight = 1;
  double value = 0.0;  // may be kUnexplored
};

struct Plan {
  std::vector<std::size_t> selected;  // ascending task ids
  Allocation allocation;
  double planned_value = 0.0;  // +inf when any unexplored item is selected

  friend bool operator==(const Plan&, const Plan&) = default;
};

/// UCB1 index mu_hat + v * sqrt(c * ln t / n). Returns kUnexplored when n == 0.
inline double ucb_index(double mu_hat, long n, long t, double v, double c) {
  if (n <= 0) return kUnexplored;
  const double radius = std::sqrt(c * std::log(static_cast<double>(t)) /
                                  static_cast<double>(n));
  return mu_hat + v * radius;
}

namespace detail {

struct DpCell {
  double value = 0.0;
  int weight = 0;
  bool take = false;
};

}  // namespace detail

/// Solves max sum(value) s.t. sum(weight) <= capacity over the given items.
///
/// Unexplored items (value == kUnexplored) are packed first, greedily in
/// ascending (weight, task_id) order while they fit. The residual capacity is
/// then filled by an exact DP over the finite items. Among value ties the
/// DP prefers the smaller total weight, then the lexicographically smallest
/// set of task ids.
///
/// `num_tasks` sizes the returned allocation; it defaults to 1 + the largest
/// task id present.
inline Plan solve_knapsack(const std::vector<KnapsackItem>& items, int capacity,
                           std::size_t num_tasks = 0) {
  if (capacity < 0) throw InputError("knapsack capacity must be >= 0");
  for (const auto& it : items) {
    if (it.weight < 1) throw InputError("knapsack item weight must be >= 1");
    if (!(it.value >= 0.0)) throw InputError("knapsack item value must be >= 0");
    num_tasks = std::max(num_tasks, it.task_id + 1);
  }

  Plan plan;
  plan.allocation = Allocation(num_tasks);

  std::vector<const KnapsackItem*> unexplored;
  std::vector<const KnapsackItem*> finite;
  for (const auto& it : items) {
    (is_unexplored(it.value) ? unexplored : finite).push_back(&it);
  }

  std::stable_sort(unexplored.begin(), unexplored.end(),
                   [](const KnapsackItem* a, const KnapsackItem* b) {
                     if (a->weight != b->weight) return a->weight < b->weight;
                     return a->task_id < b->task_id;
                   });
  int residual = capacity;
  bool any_unexplored = false;
  for (const KnapsackItem* it : unexplored) {
    if (it->weight > residual) break;
    residual -= it->weight;
    plan.selected.push_back(it->task_id);
    plan.allocation[it->task_id] = it->weight;
    any_unexplored = true;
  }

  std::sort(finite.begin(), finite.end(),
            [](const KnapsackItem* a, const KnapsackItem* b) {
              return a->task_id < b->task_id;
            });

  // best[i][c]: optimum over finite[i..] with capacity c. Sweeping items in
  // descending id order makes the lexicographic tie-break local: on an exact
  // (value, weight) tie, taking item i yields the lex-smaller id set.
  const std::size_t n = finite.size();
  const auto cols = static_cast<std::size_t>(residual) + 1;
  std::vector<detail::DpCell> best((n + 1) * cols);
  auto cell = [&](std::size_t i, std::size_t c) -> detail::DpCell& {
    return best[i * cols + c];
  };
  for (std::size_t i = n; i-- > 0;) {
    const KnapsackItem& it = *finite[i];
    for (std::size_t c = 0; c < cols; ++c) {
      detail::DpCell skip = cell(i + 1, c);
      skip.take = false;
      detail::DpCell out = skip;
      if (static_cast<std::size_t>(it.weight) <= c) {
        const detail::DpCell& rest = cell(i + 1, c - it.weight);
        detail::DpCell take{it.value + rest.value, it.weight + rest.weight, true};
        if (take.value > skip.value ||
            (take.value == skip.value && take.weight <= skip.weight)) {
          out = take;
        }
      }
      cell(i, c) = out;
    }
  }

  double finite_value = 0.0;
  std::size_t c = cols - 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (cell(i, c).take) {
      const KnapsackItem& it = *finite[i];
      plan.selected.push_back(it.task_id);
      plan.allocation[it.task_id] = it.weight;
      finite_value += it.value;
      c -= static_cast<std::size_t>(it.weight);
    }
  }
  std::sort(plan.selected.begin(), plan.selected.end());
  plan.planned_value = any_unexplored ? kUnexplored : finite_value;
  return plan;
}

}  // namespace tacmab
