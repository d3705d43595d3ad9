#include "kpflow/knapsack.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

#include "kpflow/errors.hpp"

namespace kpflow::knapsack {

void Instance::validate() const {
  if (capacity_kb < 0) throw InvalidInstance("knapsack capacity must be >= 0");
  std::unordered_set<std::int64_t> ids;
  ids.reserve(items.size());
  for (const auto& item : items) {
    if (item.weight_kb < 0) {
      throw InvalidInstance("item " + std::to_string(item.id) + " has negative weight");
    }
    if (item.value < 1 || item.value > 255) {
      throw InvalidInstance("item " + std::to_string(item.id) + " value outside [1, 255]");
    }
    if (!ids.insert(item.id).second) {
      throw InvalidInstance("duplicate item id " + std::to_string(item.id));
    }
  }
}

Solution evaluate(const Instance& instance, Selection selection) {
  Solution s;
  s.selection = std::move(selection);
  const std::size_t n = std::min(s.selection.size(), instance.items.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (s.selection[i] != 0) {
      s.total_value += instance.items[i].value;
      s.total_weight_kb += instance.items[i].weight_kb;
    }
  }
  return s;
}

Solution solve_exact_dp(const Instance& instance, std::size_t cell_budget) {
  instance.validate();
  const std::size_t n = instance.size();
  if (n == 0) return evaluate(instance, {});

  const auto cap = static_cast<std::size_t>(instance.capacity_kb);
  const std::size_t width = cap + 1;
  if (width > cell_budget / n) {
    throw CapacityTooLarge("DP table of " + std::to_string(n) + " x " +
                           std::to_string(width) + " cells exceeds budget of " +
                           std::to_string(cell_budget));
  }

  // Suffix DP: best[c] holds the optimum over items i..n-1 with capacity c.
  // take bit (i, c) records that taking item i is strictly better, so a
  // forward walk prefers dv_i = 0 on ties and yields the lex-smallest optimum.
  std::vector<std::int64_t> best(width, 0);
  std::vector<bool> take(n * width, false);
  for (std::size_t ii = n; ii-- > 0;) {
    const auto w = static_cast<std::size_t>(instance.items[ii].weight_kb);
    const std::int64_t v = instance.items[ii].value;
    if (w > cap) continue;
    for (std::size_t c = cap + 1; c-- > w;) {
      const std::int64_t with = best[c - w] + v;
      if (with > best[c]) {
        best[c] = with;
        take[ii * width + c] = true;
      }
    }
  }

  Selection selection(n, 0);
  std::size_t c = cap;
  for (std::size_t i = 0; i < n; ++i) {
    if (take[i * width + c]) {
      selection[i] = 1;
      c -= static_cast<std::size_t>(instance.items[i].weight_kb);
    }
  }
  return evaluate(instance, std::move(selection));
}

Solution solve_exhaustive(const Instance& instance) {
  instance.validate();
  const std::size_t n = instance.size();
  if (n > kMaxExhaustiveItems) {
    throw InstanceTooLarge("exhaustive search supports at most " +
                           std::to_string(kMaxExhaustiveItems) + " items, got " +
                           std::to_string(n));
  }

  // Item i maps to bit (n - 1 - i), so increasing masks visit selections in
  // lexicographic order and the first strict maximum is the lex-smallest.
  const std::uint64_t total = std::uint64_t{1} << n;
  std::uint64_t best_mask = 0;
  std::int64_t best_value = -1;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::int64_t weight = 0;
    std::int64_t value = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> (n - 1 - i)) & 1U) {
        weight += instance.items[i].weight_kb;
        value += instance.items[i].value;
      }
    }
    if (weight <= instance.capacity_kb && value > best_value) {
      best_value = value;
      best_mask = mask;
    }
  }

  Selection selection(n, 0);
  for (std::size_t i = 0; i < n; ++i) selection[i] = (best_mask >> (n - 1 - i)) & 1U;
  return evaluate(instance, std::move(selection));
}

std::vector<std::size_t> density_order(const Instance& instance) {
  const auto& items = instance.items;
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Item& x = items[a];
    const Item& y = items[b];
    const bool x_free = x.weight_kb == 0;
    const bool y_free = y.weight_kb == 0;
    if (x_free != y_free) return x_free;
    if (!x_free) {
      // v_x / w_x vs v_y / w_y without division.
      const auto lhs = static_cast<__int128>(x.value) * y.weight_kb;
      const auto rhs = static_cast<__int128>(y.value) * x.weight_kb;
      if (lhs != rhs) return lhs > rhs;
    }
    return x.id < y.id;
  });
  return order;
}

Solution solve_greedy_ratio(const Instance& instance) {
  instance.validate();
  Selection selection(instance.size(), 0);
  std::int64_t remaining = instance.capacity_kb;
  for (std::size_t i : density_order(instance)) {
    if (instance.items[i].weight_kb <= remaining) {
      selection[i] = 1;
      remaining -= instance.items[i].weight_kb;
    }
  }
  return evaluate(instance, std::move(selection));
}

}  // namespace kpflow::knapsack
