#include "kpflow/fairshare.hpp"

#include <algorithm>
#include <limits>

namespace kpflow::sim {

std::vector<double> max_min_rates(std::span<const double> capacities,
                                  std::span<const Demand> demands) {
  std::vector<double> rates(demands.size(), 0.0);
  std::vector<double> residual(capacities.begin(), capacities.end());
  std::vector<std::size_t> users(capacities.size(), 0);
  std::vector<bool> frozen(demands.size(), false);

  std::size_t unfrozen = 0;
  for (std::size_t f = 0; f < demands.size(); ++f) {
    if (demands[f].channels.empty()) {
      frozen[f] = true;
      continue;
    }
    ++unfrozen;
    for (std::size_t c : demands[f].channels) ++users[c];
  }

  while (unfrozen > 0) {
    std::size_t bottleneck = 0;
    double share = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < residual.size(); ++c) {
      if (users[c] == 0) continue;
      const double s = residual[c] / static_cast<double>(users[c]);
      if (s < share) {
        share = s;
        bottleneck = c;
      }
    }
    share = std::max(share, 0.0);

    for (std::size_t f = 0; f < demands.size(); ++f) {
      if (frozen[f]) continue;
      const auto& ch = demands[f].channels;
      if (std::find(ch.begin(), ch.end(), bottleneck) == ch.end()) continue;
      rates[f] = share;
      frozen[f] = true;
      --unfrozen;
      for (std::size_t c : ch) {
        residual[c] = std::max(0.0, residual[c] - share);
        --users[c];
      }
    }
  }
  return rates;
}

}  // namespace kpflow::sim
