#include "kpflow/simengine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>

#include "kpflow/errors.hpp"
#include "kpflow/fairshare.hpp"
#include "kpflow/rng.hpp"

namespace kpflow::sim {

void SimConfig::validate() const {
  if (!(loss_rate >= 0.0 && loss_rate < 1.0)) throw InvalidSimConfig("loss_rate must lie in [0, 1)");
  if (packet_size_bytes < 1) throw InvalidSimConfig("packet_size_bytes must be >= 1");
  if (!(time_resolution_s >= 0.0)) throw InvalidSimConfig("time_resolution_s must be >= 0");
  if (!std::is_sorted(timeline_s.begin(), timeline_s.end())) {
    throw InvalidSimConfig("timeline samples must be non-decreasing");
  }
}

double plr(std::int64_t total_sent_packets, std::int64_t received_packets) {
  if (total_sent_packets <= 0) throw NoTraffic("no packets were sent");
  return static_cast<double>(total_sent_packets - received_packets) /
         static_cast<double>(total_sent_packets) * 100.0;
}

double goodput(std::int64_t max_received_in_sequence, std::int64_t total_sent) {
  if (total_sent <= 0) throw NoTraffic("no packets were sent");
  return static_cast<double>(max_received_in_sequence) / static_cast<double>(total_sent);
}

std::vector<std::int64_t> mf_timeline(const RunReport& report,
                                      std::span<const double> sample_times) {
  std::vector<double> finishes;
  for (const FlowRecord& r : report.flows) {
    if (r.cls == traffic::FlowClass::mice) finishes.push_back(r.finish_s);
  }
  std::sort(finishes.begin(), finishes.end());
  std::vector<std::int64_t> counts;
  counts.reserve(sample_times.size());
  for (double t : sample_times) {
    counts.push_back(std::upper_bound(finishes.begin(), finishes.end(), t) - finishes.begin());
  }
  return counts;
}

namespace {

/// Channels for a path; throws InvalidPath.
std::vector<std::size_t> channels_of(const topo::Topology& topo, const traffic::Flow& flow,
                                     const topo::Path& path) {
  if (path.size() < 2 || path.front() != flow.src_host || path.back() != flow.dst_host) {
    throw InvalidPath("path of flow " + std::to_string(flow.id) +
                      " does not join its source and destination");
  }
  std::vector<std::size_t> channels;
  channels.reserve(path.size() - 1);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto link = topo.link_between(path[i], path[i + 1]);
    if (!link) {
      throw InvalidPath("flow " + std::to_string(flow.id) + " crosses missing link " +
                        std::to_string(path[i]) + "-" + std::to_string(path[i + 1]));
    }
    const auto& l = topo.link(*link);
    channels.push_back(2 * static_cast<std::size_t>(*link) + (path[i] == l.a ? 0 : 1));
  }
  return channels;
}

std::vector<double> channel_capacities(const topo::Topology& topo) {
  std::vector<double> caps;
  caps.reserve(2 * topo.links().size());
  for (const auto& l : topo.links()) {
    caps.push_back(l.capacity_kb_per_s);
    caps.push_back(l.capacity_kb_per_s);
  }
  return caps;
}

std::vector<const sched::ScheduleDecision*> match_decisions(
    std::span<const traffic::Flow> flows, std::span<const sched::ScheduleDecision> decisions) {
  std::unordered_map<std::int64_t, const sched::ScheduleDecision*> by_id;
  by_id.reserve(decisions.size());
  for (const auto& d : decisions) by_id[d.flow_id] = &d;
  std::vector<const sched::ScheduleDecision*> out;
  out.reserve(flows.size());
  for (const auto& f : flows) {
    auto it = by_id.find(f.id);
    if (it == by_id.end()) throw MissingDecision("no decision for flow " + std::to_string(f.id));
    out.push_back(it->second);
  }
  return out;
}

struct Transfer {
  std::int64_t bytes_sent = 0;
  std::int64_t packets_sent = 0;
  std::int64_t packets_delivered = 0;
};

Transfer draw_transfer(std::int64_t size_bytes, const SimConfig& cfg, std::uint64_t stream) {
  Transfer t;
  const std::int64_t p = cfg.packet_size_bytes;
  t.packets_delivered = (size_bytes + p - 1) / p;
  t.packets_sent = t.packets_delivered;
  t.bytes_sent = size_bytes;
  if (cfg.loss_rate <= 0.0 || t.packets_delivered == 0) return t;

  Rng rng = make_rng({cfg.rng_seed, stream});
  const std::int64_t last = size_bytes - (t.packets_delivered - 1) * p;
  for (std::int64_t j = 0; j < t.packets_delivered; ++j) {
    const std::int64_t bytes = j + 1 == t.packets_delivered ? last : p;
    while (uniform01(rng) < cfg.loss_rate) {
      ++t.packets_sent;
      t.bytes_sent += bytes;
    }
  }
  return t;
}

}  // namespace

RunReport run(const topo::Topology& topo, std::span<const traffic::Flow> flows,
              std::span<const sched::ScheduleDecision> decisions, const SimConfig& config,
              const RateObserver& observer) {
  config.validate();
  const std::size_t n = flows.size();
  const auto matched = match_decisions(flows, decisions);
  const auto capacities = channel_capacities(topo);

  struct State {
    std::vector<std::size_t> channels;
    double remaining_kb = 0.0;
    double rate = 0.0;
    bool started = false;
    bool done = false;
  };
  std::vector<State> state(n);
  RunReport report;
  report.flows.resize(n);

  using PairKey = std::pair<topo::NodeId, topo::NodeId>;
  std::map<PairKey, std::int64_t> phase0_outstanding;

  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = flows[i];
    const auto& d = *matched[i];
    if (f.size_kb < 1) throw InvalidPath("flow " + std::to_string(f.id) + " has no payload");
    state[i].channels = channels_of(topo, f, d.path);

    FlowRecord& r = report.flows[i];
    r.id = f.id;
    r.cls = traffic::classify(f);
    r.size_kb = f.size_kb;
    r.phase = d.phase;
    r.priority = d.priority;
    r.path = d.path;
    r.bytes_delivered = f.size_kb * kBytesPerKb;
    const Transfer t = draw_transfer(r.bytes_delivered, config, static_cast<std::uint64_t>(f.id));
    r.bytes_sent = t.bytes_sent;
    r.packets_sent = t.packets_sent;
    r.packets_delivered = t.packets_delivered;
    state[i].remaining_kb = static_cast<double>(r.bytes_sent) / static_cast<double>(kBytesPerKb);

    if (d.phase == sched::kSelectedPhase) ++phase0_outstanding[{f.src_host, f.dst_host}];
  }

  auto gate_open = [&](std::size_t i) {
    if (matched[i]->phase == sched::kSelectedPhase) return true;
    auto it = phase0_outstanding.find({flows[i].src_host, flows[i].dst_host});
    return it == phase0_outstanding.end() || it->second == 0;
  };

  const double eps = config.time_resolution_s;
  double now = 0.0;
  std::size_t completed = 0;
  std::vector<std::size_t> active;
  std::vector<Demand> demands;
  std::vector<double> load(capacities.size());

  while (completed < n) {
    for (std::size_t i = 0; i < n; ++i) {
      State& s = state[i];
      if (s.started || s.done || flows[i].start_time_s > now + eps || !gate_open(i)) continue;
      s.started = true;
      report.flows[i].start_s = std::max(now, flows[i].start_time_s);
      active.push_back(i);
    }

    double next_arrival = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!state[i].started && gate_open(i)) {
        next_arrival = std::min(next_arrival, flows[i].start_time_s);
      }
    }
    if (active.empty()) {
      if (!std::isfinite(next_arrival)) break;  // unreachable: gates open on completion
      now = std::max(now, next_arrival);
      continue;
    }

    demands.clear();
    for (std::size_t i : active) demands.push_back({state[i].channels});
    const auto rates = max_min_rates(capacities, demands);
    for (std::size_t a = 0; a < active.size(); ++a) state[active[a]].rate = rates[a];

    if (observer) {
      std::fill(load.begin(), load.end(), 0.0);
      for (std::size_t a = 0; a < active.size(); ++a) {
        for (std::size_t c : state[active[a]].channels) load[c] += rates[a];
      }
      observer(now, load, capacities);
    }

    double dt = next_arrival - now;
    for (std::size_t i : active) dt = std::min(dt, state[i].remaining_kb / state[i].rate);
    dt = std::max(dt, 0.0);
    now += dt;

    std::vector<std::size_t> still_active;
    still_active.reserve(active.size());
    for (std::size_t i : active) {
      State& s = state[i];
      s.remaining_kb -= s.rate * dt;
      if (s.remaining_kb <= s.rate * eps || s.remaining_kb <= 0.0) {
        s.remaining_kb = 0.0;
        s.done = true;
        ++completed;
        FlowRecord& r = report.flows[i];
        r.finish_s = now;
        r.fct_s = r.finish_s - r.start_s;
        if (r.phase == sched::kSelectedPhase) {
          --phase0_outstanding[{flows[i].src_host, flows[i].dst_host}];
        }
      } else {
        still_active.push_back(i);
      }
    }
    active.swap(still_active);
  }

  double mf_sum = 0.0;
  double ef_sum = 0.0;
  std::int64_t mf_count = 0;
  std::int64_t ef_count = 0;
  std::int64_t delivered_bytes = 0;
  for (const FlowRecord& r : report.flows) {
    report.packets_sent += r.packets_sent;
    report.packets_delivered += r.packets_delivered;
    delivered_bytes += r.bytes_delivered;
    if (r.cls == traffic::FlowClass::mice) {
      mf_sum += r.fct_s;
      ++mf_count;
    } else {
      ef_sum += r.fct_s;
      ++ef_count;
    }
  }
  if (report.packets_sent > 0) {
    report.plr_percent = plr(report.packets_sent, report.packets_delivered);
    report.goodput = goodput(report.packets_delivered, report.packets_sent);
    report.mean_packet_size_bytes =
        static_cast<double>(delivered_bytes) / static_cast<double>(report.packets_delivered);
  }
  report.mean_mf_fct_s = mf_count > 0 ? mf_sum / static_cast<double>(mf_count) : 0.0;
  report.mean_ef_fct_s = ef_count > 0 ? ef_sum / static_cast<double>(ef_count) : 0.0;
  report.timeline_s = config.timeline_s;
  report.mf_received = mf_timeline(report, config.timeline_s);
  return report;
}

std::vector<double> uplink_utilization(const topo::Topology& topo,
                                       std::span<const traffic::Flow> flows,
                                       std::span<const sched::ScheduleDecision> decisions) {
  const auto matched = match_decisions(flows, decisions);
  const auto capacities = channel_capacities(topo);
  std::vector<Demand> demands;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    if (flows[i].start_time_s > 0.0) continue;
    demands.push_back({channels_of(topo, flows[i], matched[i]->path)});
  }
  const auto rates = max_min_rates(capacities, demands);
  std::vector<double> load(capacities.size(), 0.0);
  for (std::size_t a = 0; a < demands.size(); ++a) {
    for (std::size_t c : demands[a].channels) load[c] += rates[a];
  }

  // Both volumes over a one-second polling interval, in whole KB.
  std::vector<double> util;
  util.reserve(topo.hosts().size());
  for (topo::NodeId h : topo.hosts()) {
    const auto link = topo.link_between(h, topo.edge_switch_of(h));
    const auto& l = topo.link(*link);
    const std::size_t up = 2 * static_cast<std::size_t>(*link) + (h == l.a ? 0 : 1);
    util.push_back(sched::link_utilization(std::llround(load[up]),
                                           std::llround(capacities[up])));
  }
  return util;
}

}  // namespace kpflow::sim
