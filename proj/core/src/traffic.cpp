#include "kpflow/traffic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "kpflow/errors.hpp"
#include "kpflow/rng.hpp"

namespace kpflow::traffic {

std::string_view to_string(FlowClass c) noexcept {
  return c == FlowClass::mice ? "MF" : "EF";
}

std::string_view to_string(Phase p) noexcept {
  switch (p) {
    case Phase::selected: return "selected";
    case Phase::non_selected: return "non-selected";
    case Phase::unscheduled: return "unscheduled";
  }
  return "unscheduled";
}

FlowClass classify(std::int64_t size_kb) noexcept {
  return size_kb <= kMiceMaxKb ? FlowClass::mice : FlowClass::elephant;
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_double(std::string_view s, std::string_view what) {
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used != str.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InvalidWorkload(fmt::format("bad number '{}' in {}", s, what));
  }
}

std::int64_t to_int(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InvalidWorkload(fmt::format("bad integer '{}' in {}", s, what));
  }
  return v;
}

}  // namespace

TrafficPattern parse_pattern(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts[0] == "random" && parts.size() == 1) return RandomPattern{};
  if (parts[0] == "stride" && parts.size() == 2) return Stride{to_int(parts[1], "stride")};
  if (parts[0] == "stag" && parts.size() == 3) {
    Stag s{to_double(parts[1], "stag"), to_double(parts[2], "stag")};
    if (s.edge_p < 0.0 || s.pod_p < 0.0 || s.edge_p + s.pod_p > 1.0) {
      throw InvalidWorkload(fmt::format("stag probabilities out of range in '{}'", text));
    }
    return s;
  }
  throw InvalidWorkload(
      fmt::format("unknown traffic pattern '{}' (want stag:<p>:<q> | random | stride:<i>)", text));
}

std::string to_string(const TrafficPattern& pattern) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Stag>) {
          return fmt::format("stag:{}:{}", p.edge_p, p.pod_p);
        } else if constexpr (std::is_same_v<T, Stride>) {
          return fmt::format("stride:{}", p.offset);
        } else {
          return "random";
        }
      },
      pattern);
}

std::string slug(const TrafficPattern& pattern) {
  std::string s = to_string(pattern);
  std::replace(s.begin(), s.end(), ':', '-');
  return s;
}

void WorkloadSpec::validate() const {
  if (num_flows < 0) throw InvalidWorkload("num_flows must be >= 0");
  if (!(mf_fraction >= 0.0 && mf_fraction <= 1.0)) {
    throw InvalidWorkload("mf_fraction must lie in [0, 1]");
  }
  if (mf_min_kb < 1 || mf_min_kb > mf_max_kb) throw InvalidWorkload("bad mice size range");
  if (ef_min_kb > ef_max_kb || ef_min_kb <= mf_max_kb) {
    throw InvalidWorkload("bad elephant size range");
  }
  if (arrival_window_s < 0.0) throw InvalidWorkload("arrival window must be >= 0");
  if (const auto* s = std::get_if<Stag>(&pattern)) {
    if (s->edge_p < 0.0 || s->pod_p < 0.0 || s->edge_p + s->pod_p > 1.0) {
      throw InvalidWorkload("stag probabilities out of range");
    }
  }
}

std::int64_t WorkloadSpec::num_mice() const noexcept {
  return std::llround(static_cast<double>(num_flows) * mf_fraction);
}

namespace {

struct PeerClasses {
  std::vector<NodeId> same_edge;
  std::vector<NodeId> same_pod;  // different edge switch
  std::vector<NodeId> remote;    // other pods
};

PeerClasses peers_of(NodeId src, const topo::Topology& topo) {
  PeerClasses c;
  const NodeId edge = topo.edge_switch_of(src);
  const auto pod = topo.node(src).pod;
  for (NodeId h : topo.hosts()) {
    if (h == src) continue;
    if (topo.edge_switch_of(h) == edge) {
      c.same_edge.push_back(h);
    } else if (topo.node(h).pod == pod) {
      c.same_pod.push_back(h);
    } else {
      c.remote.push_back(h);
    }
  }
  return c;
}

NodeId pick(Rng& rng, const std::vector<NodeId>& from) {
  return from[static_cast<std::size_t>(
      uniform_int(rng, 0, static_cast<std::int64_t>(from.size()) - 1))];
}

}  // namespace

std::vector<Flow> generate(const WorkloadSpec& spec, const topo::Topology& topo) {
  spec.validate();
  const auto& hosts = topo.hosts();
  const auto num_hosts = static_cast<std::int64_t>(hosts.size());
  if (num_hosts < 2) throw PatternInfeasible("workload needs at least two hosts");

  std::vector<PeerClasses> peers;
  if (const auto* s = std::get_if<Stag>(&spec.pattern)) {
    peers.reserve(hosts.size());
    for (NodeId h : hosts) {
      peers.push_back(peers_of(h, topo));
      const auto& p = peers.back();
      if ((s->edge_p > 0.0 && p.same_edge.empty()) || (s->pod_p > 0.0 && p.same_pod.empty()) ||
          (s->edge_p + s->pod_p < 1.0 && p.remote.empty())) {
        throw PatternInfeasible(fmt::format("{} needs a peer class that host {} lacks",
                                            to_string(spec.pattern), h));
      }
    }
  }
  if (const auto* s = std::get_if<Stride>(&spec.pattern)) {
    if (((s->offset % num_hosts) + num_hosts) % num_hosts == 0) {
      throw PatternInfeasible(fmt::format("stride:{} maps every host to itself", s->offset));
    }
  }

  // Independent streams so the size draws do not depend on the pattern.
  Rng class_rng = make_rng({spec.rng_seed, 1});
  Rng size_rng = make_rng({spec.rng_seed, 2});
  Rng endpoint_rng = make_rng({spec.rng_seed, 3});
  Rng arrival_rng = make_rng({spec.rng_seed, 4});

  const std::int64_t n = spec.num_flows;
  const std::int64_t mice = spec.num_mice();
  std::vector<FlowClass> classes(static_cast<std::size_t>(n), FlowClass::elephant);
  std::fill_n(classes.begin(), mice, FlowClass::mice);
  for (std::int64_t i = n - 1; i > 0; --i) {  // Fisher-Yates
    std::swap(classes[static_cast<std::size_t>(i)],
              classes[static_cast<std::size_t>(uniform_int(class_rng, 0, i))]);
  }

  std::vector<Flow> flows(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    Flow& f = flows[static_cast<std::size_t>(i)];
    f.id = i;
    f.size_kb = classes[static_cast<std::size_t>(i)] == FlowClass::mice
                    ? uniform_int(size_rng, spec.mf_min_kb, spec.mf_max_kb)
                    : uniform_int(size_rng, spec.ef_min_kb, spec.ef_max_kb);

    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Stride>) {
            const std::int64_t x = i % num_hosts;
            const std::int64_t y = (((x + p.offset) % num_hosts) + num_hosts) % num_hosts;
            f.src_host = hosts[static_cast<std::size_t>(x)];
            f.dst_host = hosts[static_cast<std::size_t>(y)];
          } else if constexpr (std::is_same_v<T, RandomPattern>) {
            const std::int64_t s = uniform_int(endpoint_rng, 0, num_hosts - 1);
            std::int64_t d = uniform_int(endpoint_rng, 0, num_hosts - 2);
            if (d >= s) ++d;
            f.src_host = hosts[static_cast<std::size_t>(s)];
            f.dst_host = hosts[static_cast<std::size_t>(d)];
          } else {
            const std::int64_t s = uniform_int(endpoint_rng, 0, num_hosts - 1);
            const PeerClasses& pc = peers[static_cast<std::size_t>(s)];
            const double u = uniform01(endpoint_rng);
            f.src_host = hosts[static_cast<std::size_t>(s)];
            if (u < p.edge_p) {
              f.dst_host = pick(endpoint_rng, pc.same_edge);
            } else if (u < p.edge_p + p.pod_p) {
              f.dst_host = pick(endpoint_rng, pc.same_pod);
            } else {
              f.dst_host = pick(endpoint_rng, pc.remote);
            }
          }
        },
        spec.pattern);

    if (spec.arrival_window_s > 0.0) {
      f.start_time_s = uniform01(arrival_rng) * spec.arrival_window_s;
    }
  }
  return flows;
}

void write_workload_csv(std::ostream& out, const std::vector<Flow>& flows) {
  out << "id,src,dst,size_kb\n";
  for (const Flow& f : flows) {
    out << f.id << ',' << f.src_host << ',' << f.dst_host << ',' << f.size_kb << '\n';
  }
}

std::vector<Flow> read_workload_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("id,src,dst,size_kb", 0) != 0) {
    throw InvalidWorkload("workload CSV must start with header id,src,dst,size_kb");
  }
  std::vector<Flow> flows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 4) {
      throw InvalidWorkload(fmt::format("workload CSV line {} has {} columns", line_no, cols.size()));
    }
    Flow f;
    f.id = to_int(cols[0], "id");
    f.src_host = static_cast<NodeId>(to_int(cols[1], "src"));
    f.dst_host = static_cast<NodeId>(to_int(cols[2], "dst"));
    f.size_kb = to_int(cols[3], "size_kb");
    if (f.size_kb < 1) throw InvalidWorkload(fmt::format("line {}: size_kb must be >= 1", line_no));
    flows.push_back(f);
  }
  return flows;
}

}  // namespace kpflow::traffic
