#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kpflow::sim {

/// The directed channels a flow crosses.
struct Demand {
  std::vector<std::size_t> channels;
};

/// Max-min fair rates by progressive filling: repeatedly saturate the
/// channel with the smallest equal share among its unfrozen flows, freeze
/// those flows at that share, and charge them to every channel they cross.
/// A demand with no channels gets rate 0.
std::vector<double> max_min_rates(std::span<const double> capacities,
                                  std::span<const Demand> demands);

}  // namespace kpflow::sim
