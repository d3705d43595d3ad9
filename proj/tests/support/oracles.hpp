#pragma once

// Reference implementations used to check the library. Each one is written
// the slow, obvious way and shares no code with core/.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "kpflow/knapsack.hpp"

namespace kpflow::testing {

/// Best total value over all subsets, by plain recursion.
inline std::int64_t brute_force_value(const knapsack::Instance& inst, std::size_t i = 0,
                                      std::int64_t room = -1) {
  if (room < 0) room = inst.capacity_kb;
  if (i == inst.items.size()) return 0;
  std::int64_t best = brute_force_value(inst, i + 1, room);
  const auto& item = inst.items[i];
  if (item.weight_kb <= room) {
    best = std::max(best, item.value + brute_force_value(inst, i + 1, room - item.weight_kb));
  }
  return best;
}

/// Replays the tagging loop step by step: the elephant range is walked bin
/// by bin (lower = upper + 1, upper = lower + width) while the value walks
/// down a descending value vector. Sizes past the last bin keep value 1.
inline int tos_loop_replay(std::int64_t size_kb, std::int64_t mf_threshold = 100,
                           std::int64_t max_size = 200000, int num_values = 255) {
  if (size_kb <= mf_threshold) return num_values;
  const std::int64_t width = (max_size - mf_threshold) / (num_values - 1);
  std::vector<int> values;
  for (int v = num_values - 1; v >= 1; --v) values.push_back(v);

  std::int64_t lower = mf_threshold + 1;
  std::int64_t upper = lower + width;
  std::size_t idx = 0;
  while (idx < values.size()) {
    if (size_kb >= lower && size_kb <= upper) return values[idx];
    lower = upper + 1;
    upper = lower + width;
    ++idx;
  }
  return 1;
}

struct RandomInstanceSpec {
  std::size_t n = 10;
  std::int64_t w_lo = 1, w_hi = 1000;
  std::int64_t v_lo = 1, v_hi = 255;
};

/// Instance with capacity = total weight / 2.
inline knapsack::Instance random_instance(std::mt19937_64& rng, const RandomInstanceSpec& spec) {
  std::uniform_int_distribution<std::int64_t> w(spec.w_lo, spec.w_hi);
  std::uniform_int_distribution<std::int64_t> v(spec.v_lo, spec.v_hi);
  knapsack::Instance inst;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < spec.n; ++i) {
    inst.items.push_back({static_cast<std::int64_t>(i), w(rng), v(rng)});
    total += inst.items.back().weight_kb;
  }
  inst.capacity_kb = total / 2;
  return inst;
}

struct TwoFlowFinish {
  double first = 0.0;   // finish time of the flow starting at t1
  double second = 0.0;  // finish time of the flow starting at t2
};

/// Two flows on one bottleneck of capacity c, sizes s1, s2, starting at
/// t1 <= t2. Solo rate c, shared rate c / 2, hand-derived.
inline TwoFlowFinish two_flow_bottleneck(double c, double s1, double t1, double s2, double t2) {
  const double solo_end = t1 + s1 / c;
  if (solo_end <= t2) return {solo_end, t2 + s2 / c};
  const double r1 = s1 - c * (t2 - t1);  // left of flow 1 when flow 2 arrives
  if (r1 <= s2) {
    const double f1 = t2 + 2.0 * r1 / c;
    return {f1, f1 + (s2 - r1) / c};
  }
  const double f2 = t2 + 2.0 * s2 / c;
  return {f2 + (r1 - s2) / c, f2};
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace kpflow::testing
