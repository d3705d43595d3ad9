#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kpflow/topology.hpp"

namespace kpflow::traffic {

using topo::NodeId;

inline constexpr std::int64_t kMiceMaxKb = 100;
inline constexpr std::int64_t kElephantMaxKb = 200'000;

enum class FlowClass { mice, elephant };
enum class Phase { selected, non_selected, unscheduled };

std::string_view to_string(FlowClass c) noexcept;
std::string_view to_string(Phase p) noexcept;

struct Flow {
  std::int64_t id = 0;
  NodeId src_host = 0;
  NodeId dst_host = 0;
  std::int64_t size_kb = 1;
  std::optional<int> tos_value;
  double start_time_s = 0.0;
  std::optional<double> completion_time_s;
  std::int64_t bytes_sent = 0;
  std::int64_t bytes_delivered = 0;
  Phase phase = Phase::unscheduled;
};

/// Mice iff size <= 100 KB.
FlowClass classify(std::int64_t size_kb) noexcept;
inline FlowClass classify(const Flow& flow) noexcept { return classify(flow.size_kb); }

struct Stag {
  double edge_p = 0.0;
  double pod_p = 0.0;
  friend bool operator==(const Stag&, const Stag&) = default;
};
struct RandomPattern {
  friend bool operator==(const RandomPattern&, const RandomPattern&) = default;
};
struct Stride {
  std::int64_t offset = 1;
  friend bool operator==(const Stride&, const Stride&) = default;
};

using TrafficPattern = std::variant<Stag, RandomPattern, Stride>;

/// Parses "stag:<p>:<q>", "random" or "stride:<i>". Throws InvalidWorkload.
TrafficPattern parse_pattern(std::string_view text);
/// Inverse of parse_pattern.
std::string to_string(const TrafficPattern& pattern);
/// Filesystem-friendly form, e.g. "stag-0.3-0.3".
std::string slug(const TrafficPattern& pattern);

struct WorkloadSpec {
  std::int64_t num_flows = 300;
  double mf_fraction = 0.9;
  std::int64_t mf_min_kb = 1;
  std::int64_t mf_max_kb = kMiceMaxKb;
  std::int64_t ef_min_kb = kMiceMaxKb + 1;
  std::int64_t ef_max_kb = kElephantMaxKb;
  TrafficPattern pattern = Stag{0.3, 0.3};
  std::uint64_t rng_seed = 0;
  /// Arrivals uniform in [0, window]; 0 means every flow starts at t = 0.
  double arrival_window_s = 0.0;

  /// Throws InvalidWorkload.
  void validate() const;
  std::int64_t num_mice() const noexcept;
};

/// Seeded workload over the hosts of `topo`. Throws PatternInfeasible when
/// the pattern needs a peer class that does not exist (or a self-flow).
std::vector<Flow> generate(const WorkloadSpec& spec, const topo::Topology& topo);

/// id,src,dst,size_kb with a header row.
void write_workload_csv(std::ostream& out, const std::vector<Flow>& flows);
std::vector<Flow> read_workload_csv(std::istream& in);

}  // namespace kpflow::traffic
