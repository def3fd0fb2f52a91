#pragma once

// Exhaustive reference solvers for tests. Deliberately independent of the
// DP in planner.hpp: enumerate every subset and compare with the stated
// ordering (value desc, total weight asc, sorted id list lexicographic).

#include <algorithm>
#include <cstddef>
#include <vector>

namespace tacmab::testing {

struct BruteItem {
  std::size_t id;
  int weight;
  double value;
};

struct BruteResult {
  std::vector<std::size_t> ids;
  double value = 0.0;
  int weight = 0;
};

inline BruteResult brute_force_knapsack(const std::vector<BruteItem>& items, int capacity) {
  BruteResult best;
  bool have = false;
  const std::size_t n = items.size();
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    BruteResult cur;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1UL << i)) {
        cur.ids.push_back(items[i].id);
        cur.weight += items[i].weight;
      }
    }
    if (cur.weight > capacity) continue;
    std::sort(cur.ids.begin(), cur.ids.end());
    // Sum in descending id order, a different order from the DP's fold.
    for (auto it = cur.ids.rbegin(); it != cur.ids.rend(); ++it) {
      for (const auto& item : items) {
        if (item.id == *it) cur.value += item.value;
      }
    }
    bool better = !have || cur.value > best.value ||
                  (cur.value == best.value &&
                   (cur.weight < best.weight ||
                    (cur.weight == best.weight && cur.ids < best.ids)));
    if (better) {
      best = cur;
      have = true;
    }
  }
  return best;
}

}  // namespace tacmab::testing
