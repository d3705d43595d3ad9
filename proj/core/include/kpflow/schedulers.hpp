#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kpflow/bpso.hpp"
#include "kpflow/knapsack.hpp"
#include "kpflow/topology.hpp"
#include "kpflow/tos.hpp"
#include "kpflow/traffic.hpp"

namespace kpflow::sched {

using traffic::Flow;

inline constexpr int kSelectedPhase = 0;
inline constexpr int kNonSelectedPhase = 1;
inline constexpr int kSelectedPriority = 2;
inline constexpr int kNonSelectedPriority = 1;
inline constexpr int kDefaultPriority = 1;

/// Forwarding instruction for one flow. Phase 0 flows of a (src, dst) pair
/// are sent before any phase 1 flow of the same pair.
struct ScheduleDecision {
  std::int64_t flow_id = 0;
  topo::Path path;
  int phase = kSelectedPhase;
  int priority = kDefaultPriority;  ///< higher forwards first
};

struct DetectionConfig {
  double utilization_threshold = 0.7;
  void validate() const;
};

enum class SchedulerKind { size_kp_pso, ecmp };
std::string_view to_string(SchedulerKind kind) noexcept;
/// Accepts "size-kp-pso" and "ecmp".
std::optional<SchedulerKind> parse_scheduler(std::string_view text) noexcept;

/// Occupied over initial link volume. Throws ZeroCapacity.
double link_utilization(std::int64_t occupied_kb, std::int64_t initial_kb);

/// Largest group of flows sharing (src_host, dst_host) when `utilization`
/// reaches the threshold and the group has at least two members. Ties go to
/// the smaller (src, dst) key. Flows keep their input order.
std::optional<std::vector<Flow>> detect_parallel_group(std::span<const Flow> flows,
                                                       double utilization,
                                                       const DetectionConfig& cfg);

/// Knapsack model of a group: weights are sizes, values are ToS tags,
/// capacity is the next-hop capacity of the pair. Item ids are flow ids.
knapsack::Instance build_instance(std::span<const Flow> group, const topo::Topology& topo,
                                  const tos::TosTable& table);

/// Two-phase plan for one group: knapsack-selected flows in phase 0 with
/// priority 2, the rest in phase 1 with priority 1, all on the first
/// equal-cost path. Throws InvalidGroup for an empty or mixed-pair group.
std::vector<ScheduleDecision> schedule_size_kp_pso(std::span<const Flow> group,
                                                   const topo::Topology& topo,
                                                   const tos::TosTable& table,
                                                   const bpso::Config& config);

/// Stable hash of the flow key; the flow id stands in for the port.
std::uint64_t ecmp_hash(topo::NodeId src, topo::NodeId dst, std::int64_t flow_id,
                        std::uint64_t seed) noexcept;

/// Hash-based path choice among equal-cost paths; phase 0, priority 1.
std::vector<ScheduleDecision> schedule_ecmp(std::span<const Flow> flows,
                                            const topo::Topology& topo, std::uint64_t hash_seed);

}  // namespace kpflow::sched
