#include "kpflow/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "kpflow/errors.hpp"

namespace kpflow::topo {

std::string_view to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::host: return "host";
    case NodeKind::edge_switch: return "edge";
    case NodeKind::aggregation_switch: return "aggregation";
    case NodeKind::core_switch: return "core";
  }
  return "unknown";
}

NodeId Topology::add_node(NodeKind kind, std::optional<int> pod) {
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back({id, kind, pod});
  adjacency_.emplace_back();
  if (kind == NodeKind::host) hosts_.push_back(id);
  return id;
}

LinkId Topology::add_link(NodeId a, NodeId b, double capacity_kb_per_s, double loss_rate) {
  if (!contains(a) || !contains(b) || a == b) {
    throw InvalidTopology("link endpoints must be two distinct existing nodes");
  }
  if (!(capacity_kb_per_s > 0.0)) throw InvalidTopology("link capacity must be > 0");
  if (loss_rate < 0.0 || loss_rate > 1.0) throw InvalidTopology("loss rate outside [0, 1]");
  if (link_between(a, b)) throw InvalidTopology("duplicate link");

  const auto id = static_cast<LinkId>(links_.size());
  links_.push_back({a, b, capacity_kb_per_s, loss_rate});
  auto insert_sorted = [](auto& adj, NodeId n, LinkId l) {
    auto pos = std::lower_bound(adj.begin(), adj.end(), std::make_pair(n, l));
    adj.insert(pos, {n, l});
  };
  insert_sorted(adjacency_[static_cast<std::size_t>(a)], b, id);
  insert_sorted(adjacency_[static_cast<std::size_t>(b)], a, id);
  return id;
}

const Node& Topology::node(NodeId id) const {
  if (!contains(id)) throw UnknownHost("unknown node " + std::to_string(id));
  return nodes_[static_cast<std::size_t>(id)];
}

std::size_t Topology::host_index(NodeId host) const {
  auto it = std::find(hosts_.begin(), hosts_.end(), host);
  if (it == hosts_.end()) throw UnknownHost("node " + std::to_string(host) + " is not a host");
  return static_cast<std::size_t>(it - hosts_.begin());
}

NodeId Topology::edge_switch_of(NodeId host) const {
  if (!is_host(host)) throw UnknownHost("node " + std::to_string(host) + " is not a host");
  for (const auto& [peer, link] : adjacency_[static_cast<std::size_t>(host)]) {
    (void)link;
    if (nodes_[static_cast<std::size_t>(peer)].kind == NodeKind::edge_switch) return peer;
  }
  throw InvalidTopology("host " + std::to_string(host) + " has no edge switch");
}

const std::vector<std::pair<NodeId, LinkId>>& Topology::neighbors(NodeId id) const {
  if (!contains(id)) throw UnknownHost("unknown node " + std::to_string(id));
  return adjacency_[static_cast<std::size_t>(id)];
}

std::optional<LinkId> Topology::link_between(NodeId a, NodeId b) const {
  if (!contains(a) || !contains(b)) return std::nullopt;
  const auto& adj = adjacency_[static_cast<std::size_t>(a)];
  auto it = std::lower_bound(adj.begin(), adj.end(), std::make_pair(b, LinkId{0}));
  if (it != adj.end() && it->first == b) return it->second;
  return std::nullopt;
}

Topology build_fat_tree(int k, const LayerCapacities& capacities, double loss_rate) {
  if (k < 2 || k % 2 != 0) {
    throw InvalidK("fat-tree arity must be even and >= 2, got " + std::to_string(k));
  }
  const int half = k / 2;
  const double edge_cap = gbps_to_kb_per_s(capacities.edge_gbps);
  const double agg_cap = gbps_to_kb_per_s(capacities.agg_gbps);
  const double core_cap = gbps_to_kb_per_s(capacities.core_gbps);

  Topology t;
  t.fat_tree_k_ = k;

  // Hosts first so that host ids follow (pod, edge, port).
  std::vector<std::vector<std::vector<NodeId>>> hosts(k, std::vector<std::vector<NodeId>>(half));
  for (int pod = 0; pod < k; ++pod) {
    for (int e = 0; e < half; ++e) {
      for (int port = 0; port < half; ++port) {
        hosts[pod][e].push_back(t.add_node(NodeKind::host, pod));
      }
    }
  }
  std::vector<std::vector<NodeId>> edges(k);
  std::vector<std::vector<NodeId>> aggs(k);
  for (int pod = 0; pod < k; ++pod) {
    for (int e = 0; e < half; ++e) edges[pod].push_back(t.add_node(NodeKind::edge_switch, pod));
  }
  for (int pod = 0; pod < k; ++pod) {
    for (int a = 0; a < half; ++a) {
      aggs[pod].push_back(t.add_node(NodeKind::aggregation_switch, pod));
    }
  }
  std::vector<NodeId> cores;
  for (int c = 0; c < half * half; ++c) cores.push_back(t.add_node(NodeKind::core_switch));

  for (int pod = 0; pod < k; ++pod) {
    for (int e = 0; e < half; ++e) {
      for (NodeId h : hosts[pod][e]) t.add_link(h, edges[pod][e], edge_cap, loss_rate);
    }
  }
  for (int pod = 0; pod < k; ++pod) {
    for (int e = 0; e < half; ++e) {
      for (int a = 0; a < half; ++a) t.add_link(edges[pod][e], aggs[pod][a], agg_cap, loss_rate);
    }
  }
  // Aggregation switch a of every pod reaches cores [a*half, (a+1)*half).
  for (int pod = 0; pod < k; ++pod) {
    for (int a = 0; a < half; ++a) {
      for (int c = 0; c < half; ++c) {
        t.add_link(aggs[pod][a], cores[static_cast<std::size_t>(a * half + c)], core_cap,
                   loss_rate);
      }
    }
  }
  return t;
}

namespace {

void require_pair(NodeId src, NodeId dst, const Topology& topo) {
  if (!topo.is_host(src)) throw UnknownHost("unknown host " + std::to_string(src));
  if (!topo.is_host(dst)) throw UnknownHost("unknown host " + std::to_string(dst));
  if (src == dst) throw UnknownPair("source and destination are the same host");
}

}  // namespace

std::vector<Path> equal_cost_paths(NodeId src, NodeId dst, const Topology& topo) {
  require_pair(src, dst, topo);

  // BFS distances to dst, then enumerate every descending walk from src.
  // Hosts other than the endpoints never relay traffic.
  constexpr int kUnreached = std::numeric_limits<int>::max();
  std::vector<int> dist(topo.nodes().size(), kUnreached);
  std::deque<NodeId> queue{dst};
  dist[static_cast<std::size_t>(dst)] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (u != dst && topo.is_host(u)) continue;
    for (const auto& [v, link] : topo.neighbors(u)) {
      (void)link;
      if (dist[static_cast<std::size_t>(v)] == kUnreached) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  if (dist[static_cast<std::size_t>(src)] == kUnreached) return {};

  std::vector<Path> paths;
  Path current{src};
  auto extend = [&](auto&& self, NodeId u) -> void {
    if (u == dst) {
      paths.push_back(current);
      return;
    }
    if (u != src && topo.is_host(u)) return;
    for (const auto& [v, link] : topo.neighbors(u)) {
      (void)link;
      if (dist[static_cast<std::size_t>(v)] == dist[static_cast<std::size_t>(u)] - 1) {
        current.push_back(v);
        self(self, v);
        current.pop_back();
      }
    }
  };
  extend(extend, src);
  return paths;
}

std::int64_t next_hop_capacity_kb(NodeId src, NodeId dst, const Topology& topo) {
  require_pair(src, dst, topo);
  return topo.edge_switch_of(src) == topo.edge_switch_of(dst) ? kSameEdgeCapacityKb
                                                              : kBeyondEdgeCapacityKb;
}

nlohmann::json to_json(const Topology& topo) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const Node& n : topo.nodes()) {
    nlohmann::json entry{{"id", n.id}, {"kind", std::string(to_string(n.kind))}};
    entry["pod"] = n.pod ? nlohmann::json(*n.pod) : nlohmann::json(nullptr);
    nlohmann::json adj = nlohmann::json::array();
    for (const auto& [peer, link] : topo.neighbors(n.id)) {
      (void)link;
      adj.push_back(peer);
    }
    entry["neighbors"] = std::move(adj);
    nodes.push_back(std::move(entry));
  }
  nlohmann::json links = nlohmann::json::array();
  for (std::size_t i = 0; i < topo.links().size(); ++i) {
    const Link& l = topo.links()[i];
    links.push_back({{"id", i},
                     {"a", l.a},
                     {"b", l.b},
                     {"capacity_kb_per_s", l.capacity_kb_per_s},
                     {"loss_rate", l.loss_rate}});
  }
  return {{"k", topo.fat_tree_k()},
          {"num_hosts", topo.hosts().size()},
          {"num_switches", topo.num_switches()},
          {"num_links", topo.links().size()},
          {"nodes", std::move(nodes)},
          {"links", std::move(links)}};
}

}  // namespace kpflow::topo
