#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace kpflow::topo {

using NodeId = std::int32_t;
using LinkId = std::int32_t;
/// Node sequence from source host to destination host.
using Path = std::vector<NodeId>;

enum class NodeKind { host, edge_switch, aggregation_switch, core_switch };

std::string_view to_string(NodeKind kind) noexcept;

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::host;
  std::optional<int> pod;  ///< empty for core switches
};

/// Full-duplex cable; each direction has the full capacity.
struct Link {
  NodeId a = 0;
  NodeId b = 0;
  double capacity_kb_per_s = 0.0;  ///< 1 Gbps = 125000 KB/s
  double loss_rate = 0.01;
};

/// Gbps to KB/s with KB = 1000 bytes.
constexpr double gbps_to_kb_per_s(double gbps) noexcept { return gbps * 125'000.0; }

struct LayerCapacities {
  double edge_gbps = 1.0;  ///< host <-> edge switch
  double agg_gbps = 2.0;   ///< edge <-> aggregation switch
  double core_gbps = 4.0;  ///< aggregation <-> core switch
};

/// Undirected capacity-annotated graph. Immutable once built; safe to share
/// across threads for reading.
class Topology {
 public:
  NodeId add_node(NodeKind kind, std::optional<int> pod = std::nullopt);
  LinkId add_link(NodeId a, NodeId b, double capacity_kb_per_s, double loss_rate = 0.01);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Link>& links() const noexcept { return links_; }
  const Node& node(NodeId id) const;
  const Link& link(LinkId id) const { return links_.at(static_cast<std::size_t>(id)); }

  /// Hosts ordered by (pod, edge switch, port).
  const std::vector<NodeId>& hosts() const noexcept { return hosts_; }
  std::size_t num_switches() const noexcept { return nodes_.size() - hosts_.size(); }

  bool contains(NodeId id) const noexcept {
    return id >= 0 && static_cast<std::size_t>(id) < nodes_.size();
  }
  bool is_host(NodeId id) const noexcept {
    return contains(id) && nodes_[static_cast<std::size_t>(id)].kind == NodeKind::host;
  }

  /// Position of `host` in hosts(). Throws UnknownHost.
  std::size_t host_index(NodeId host) const;
  /// The edge switch a host attaches to. Throws UnknownHost.
  NodeId edge_switch_of(NodeId host) const;

  /// (neighbour, link) pairs sorted by neighbour id.
  const std::vector<std::pair<NodeId, LinkId>>& neighbors(NodeId id) const;
  std::optional<LinkId> link_between(NodeId a, NodeId b) const;

  /// Fat-tree arity, or 0 for a hand-built graph.
  int fat_tree_k() const noexcept { return fat_tree_k_; }

 private:
  friend Topology build_fat_tree(int, const LayerCapacities&, double);

  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<NodeId> hosts_;
  std::vector<std::vector<std::pair<NodeId, LinkId>>> adjacency_;
  int fat_tree_k_ = 0;
};

/// k-ary fat-tree: (k/2)^2 cores, k pods of k/2 aggregation and k/2 edge
/// switches, k/2 hosts per edge switch. Each cable is one Link, so k = 4
/// gives 16 hosts, 20 switches and 48 links. Throws InvalidK.
Topology build_fat_tree(int k, const LayerCapacities& capacities = {},
                        double loss_rate = 0.01);

/// Every shortest host-to-host path, in lexicographic order of node ids.
/// Throws UnknownHost, or UnknownPair when src == dst.
std::vector<Path> equal_cost_paths(NodeId src_host, NodeId dst_host, const Topology& topo);

inline constexpr std::int64_t kSameEdgeCapacityKb = 1'000'000;  ///< 1 GB
inline constexpr std::int64_t kBeyondEdgeCapacityKb = 2'000'000;  ///< 2 GB

/// Knapsack capacity for a sender: 1 GB when the destination hangs off the
/// sender's edge switch, 2 GB otherwise. Throws UnknownHost / UnknownPair.
std::int64_t next_hop_capacity_kb(NodeId src_host, NodeId dst_host, const Topology& topo);

/// Adjacency report used by `kpflow run --dump-topology`.
nlohmann::json to_json(const Topology& topo);

}  // namespace kpflow::topo
