#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kpflow::knapsack {

/// One 0/1 decision per item, in item order. Byte-per-bit so it can be
/// viewed through std::span.
using Selection = std::vector<std::uint8_t>;

struct Item {
  std::int64_t id = 0;
  std::int64_t weight_kb = 0;  ///< >= 0
  std::int64_t value = 1;      ///< in [1, 255]
};

struct Instance {
  std::vector<Item> items;
  std::int64_t capacity_kb = 0;

  std::size_t size() const noexcept { return items.size(); }

  /// Throws InvalidInstance when an invariant is broken.
  void validate() const;
};

struct Solution {
  Selection selection;
  std::int64_t total_value = 0;
  std::int64_t total_weight_kb = 0;

  bool feasible(const Instance& instance) const noexcept {
    return total_weight_kb <= instance.capacity_kb;
  }
};

/// Builds a Solution whose aggregates are recomputed from `selection`.
Solution evaluate(const Instance& instance, Selection selection);

inline constexpr std::size_t kDefaultCellBudget = 100'000'000;
inline constexpr std::size_t kMaxExhaustiveItems = 25;

/// Exact optimum by dynamic programming over capacities. Among optimal
/// selections the lexicographically smallest bit vector is returned.
/// Throws CapacityTooLarge when n * (capacity + 1) exceeds `cell_budget`.
Solution solve_exact_dp(const Instance& instance,
                        std::size_t cell_budget = kDefaultCellBudget);

/// Exact optimum by enumerating all 2^n subsets; same tie-break as the DP.
/// Throws InstanceTooLarge for n > 25.
Solution solve_exhaustive(const Instance& instance);

/// Takes items in non-increasing value/weight order (ties by smaller id,
/// zero weight first) whenever they still fit.
Solution solve_greedy_ratio(const Instance& instance);

/// Item indices ordered by non-increasing density, the order used by the
/// greedy solver. Zero-weight items come first.
std::vector<std::size_t> density_order(const Instance& instance);

}  // namespace kpflow::knapsack
