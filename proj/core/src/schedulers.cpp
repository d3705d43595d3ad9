#include "kpflow/schedulers.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "kpflow/errors.hpp"
#include "kpflow/rng.hpp"

namespace kpflow::sched {

void DetectionConfig::validate() const {
  if (!(utilization_threshold > 0.0 && utilization_threshold <= 1.0)) {
    throw ConfigError("scheduler.threshold", "must lie in (0, 1]");
  }
}

std::string_view to_string(SchedulerKind kind) noexcept {
  return kind == SchedulerKind::ecmp ? "ecmp" : "size-kp-pso";
}

std::optional<SchedulerKind> parse_scheduler(std::string_view text) noexcept {
  if (text == "size-kp-pso") return SchedulerKind::size_kp_pso;
  if (text == "ecmp") return SchedulerKind::ecmp;
  return std::nullopt;
}

double link_utilization(std::int64_t occupied_kb, std::int64_t initial_kb) {
  if (initial_kb <= 0) throw ZeroCapacity("initial link volume must be > 0");
  return static_cast<double>(occupied_kb) / static_cast<double>(initial_kb);
}

std::optional<std::vector<Flow>> detect_parallel_group(std::span<const Flow> flows,
                                                       double utilization,
                                                       const DetectionConfig& cfg) {
  if (utilization < cfg.utilization_threshold) return std::nullopt;

  std::map<std::pair<topo::NodeId, topo::NodeId>, std::size_t> counts;
  for (const Flow& f : flows) ++counts[{f.src_host, f.dst_host}];

  const std::pair<topo::NodeId, topo::NodeId>* best = nullptr;
  std::size_t best_count = 1;
  for (const auto& [key, count] : counts) {
    if (count > best_count) {
      best = &key;
      best_count = count;
    }
  }
  if (best == nullptr) return std::nullopt;

  std::vector<Flow> group;
  group.reserve(best_count);
  for (const Flow& f : flows) {
    if (f.src_host == best->first && f.dst_host == best->second) group.push_back(f);
  }
  return group;
}

knapsack::Instance build_instance(std::span<const Flow> group, const topo::Topology& topo,
                                  const tos::TosTable& table) {
  if (group.empty()) throw InvalidGroup("cannot schedule an empty group");
  const auto src = group.front().src_host;
  const auto dst = group.front().dst_host;
  knapsack::Instance instance;
  instance.capacity_kb = topo::next_hop_capacity_kb(src, dst, topo);
  instance.items.reserve(group.size());
  for (const Flow& f : group) {
    if (f.src_host != src || f.dst_host != dst) {
      throw InvalidGroup("group flows must share source and destination");
    }
    instance.items.push_back({f.id, f.size_kb, tos::tag(f.size_kb, table)});
  }
  return instance;
}

std::vector<ScheduleDecision> schedule_size_kp_pso(std::span<const Flow> group,
                                                   const topo::Topology& topo,
                                                   const tos::TosTable& table,
                                                   const bpso::Config& config) {
  const knapsack::Instance instance = build_instance(group, topo, table);
  const bpso::Result result = bpso::solve(instance, config);
  const auto paths = topo::equal_cost_paths(group.front().src_host, group.front().dst_host, topo);
  if (paths.empty()) throw InvalidPath("no path between group endpoints");

  std::vector<ScheduleDecision> decisions;
  decisions.reserve(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) {
    const bool selected = result.best_position[i] != 0;
    decisions.push_back({group[i].id, paths.front(),
                         selected ? kSelectedPhase : kNonSelectedPhase,
                         selected ? kSelectedPriority : kNonSelectedPriority});
  }
  return decisions;
}

std::uint64_t ecmp_hash(topo::NodeId src, topo::NodeId dst, std::int64_t flow_id,
                        std::uint64_t seed) noexcept {
  return derive_seed({seed, static_cast<std::uint64_t>(src), static_cast<std::uint64_t>(dst),
                      static_cast<std::uint64_t>(flow_id)});
}

std::vector<ScheduleDecision> schedule_ecmp(std::span<const Flow> flows,
                                            const topo::Topology& topo,
                                            std::uint64_t hash_seed) {
  std::map<std::pair<topo::NodeId, topo::NodeId>, std::vector<topo::Path>> cache;
  std::vector<ScheduleDecision> decisions;
  decisions.reserve(flows.size());
  for (const Flow& f : flows) {
    auto [it, inserted] = cache.try_emplace({f.src_host, f.dst_host});
    if (inserted) it->second = topo::equal_cost_paths(f.src_host, f.dst_host, topo);
    const auto& paths = it->second;
    if (paths.empty()) throw InvalidPath("no path for flow " + std::to_string(f.id));
    const auto h = ecmp_hash(f.src_host, f.dst_host, f.id, hash_seed);
    decisions.push_back({f.id, paths[h % paths.size()], kSelectedPhase, kDefaultPriority});
  }
  return decisions;
}

}  // namespace kpflow::sched
