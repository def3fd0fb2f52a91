#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "tacmab/errors.hpp"

namespace tacmab {

// Coalition size per task for one round.
struct Allocation {
  std::vector<int> counts;

  Allocation() = default;
  explicit Allocation(std::size_t num_tasks) : counts(num_tasks, 0) {}
  explicit Allocation(std::vector<int> c) : counts(std::move(c)) {}
  // Brace lists are counts, never a size: Allocation({2}) is one task with 2.
  Allocation(std::initializer_list<int> c) : counts(c) {}

  std::size_t size() const noexcept { return counts.size(); }
  int operator[](std::size_t k) const { return counts[k]; }
  int& operator[](std::size_t k) { return counts[k]; }

  int total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

inline void validate_allocation(const Allocation& alloc, std::size_t num_tasks,
                                int team_size) {
  if (alloc.size() != num_tasks) {
    throw InputError("allocation has " + std::to_string(alloc.size()) +
                     " entries, expected " + std::to_string(num_tasks));
  }
  long sum = 0;
  for (int c : alloc.counts) {
    if (c < 0 || c > team_size) {
      throw InputError("coalition size " + std::to_string(c) +
                       " outside [0, " + std::to_string(team_size) + "]");
    }
    sum += c;
  }
  if (sum > team_size) {
    throw InputError("allocation uses " + std::to_string(sum) +
                     " agents but the team has " + std::to_string(team_size));
  }
}

}  // namespace tacmab
