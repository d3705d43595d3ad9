#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kpflow/schedulers.hpp"
#include "kpflow/topology.hpp"
#include "kpflow/traffic.hpp"

namespace kpflow::sim {

inline constexpr std::int64_t kBytesPerKb = 1024;

struct SimConfig {
  std::uint64_t rng_seed = 0;
  std::int64_t packet_size_bytes = 1500;
  double loss_rate = 0.01;  ///< per transmitted packet
  /// Completions closer than this to an event are merged into it.
  double time_resolution_s = 1e-6;
  /// Sample instants for the received-mice timeline.
  std::vector<double> timeline_s{0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0};

  /// Throws InvalidSimConfig. loss_rate must be < 1 so every packet is
  /// eventually delivered.
  void validate() const;
};

struct FlowRecord {
  std::int64_t id = 0;
  traffic::FlowClass cls = traffic::FlowClass::mice;
  std::int64_t size_kb = 0;
  int phase = 0;
  int priority = 0;
  topo::Path path;
  double start_s = 0.0;   ///< first packet leaves the source
  double finish_s = 0.0;  ///< last packet reaches the destination
  double fct_s = 0.0;
  std::int64_t bytes_sent = 0;
  std::int64_t bytes_delivered = 0;
  std::int64_t packets_sent = 0;
  std::int64_t packets_delivered = 0;
};

/// Per-flow records (input order) plus aggregates. Means over an empty
/// class are reported as 0.
struct RunReport {
  std::vector<FlowRecord> flows;
  std::int64_t packets_sent = 0;
  std::int64_t packets_delivered = 0;
  double plr_percent = 0.0;
  double mean_mf_fct_s = 0.0;
  double mean_ef_fct_s = 0.0;
  double goodput = 1.0;
  double mean_packet_size_bytes = 0.0;
  std::vector<double> timeline_s;
  std::vector<std::int64_t> mf_received;
};

/// Called at every rate recomputation with the per-channel load and
/// capacity. Channel 2*l carries link l from a to b, 2*l+1 from b to a.
using RateObserver =
    std::function<void(double time_s, std::span<const double> load, std::span<const double> capacity)>;

/// Fluid max-min simulation of `flows` under `decisions`. Phase 1 flows of a
/// (src, dst) pair start only once every phase 0 flow of that pair is done.
/// Each packet is retransmitted while independent Bernoulli(loss_rate) draws
/// say it was lost. Throws MissingDecision or InvalidPath.
RunReport run(const topo::Topology& topo, std::span<const traffic::Flow> flows,
              std::span<const sched::ScheduleDecision> decisions, const SimConfig& config,
              const RateObserver& observer = {});

/// (sent - received) / sent * 100. Throws NoTraffic when sent == 0.
double plr(std::int64_t total_sent_packets, std::int64_t received_packets);

/// In-sequence received over sent packets. Throws NoTraffic when sent == 0.
double goodput(std::int64_t max_received_in_sequence, std::int64_t total_sent);

/// Number of mice with finish time <= t, for each t.
std::vector<std::int64_t> mf_timeline(const RunReport& report, std::span<const double> sample_times);

/// Utilisation of every host's link to its edge switch when all flows that
/// start at t = 0 share the network under `decisions`, indexed like
/// topo.hosts(). Phases are ignored: this is the load the controller sees.
std::vector<double> uplink_utilization(const topo::Topology& topo,
                                       std::span<const traffic::Flow> flows,
                                       std::span<const sched::ScheduleDecision> decisions);

/// flow_id,class,size_kb,phase,path,start_s,finish_s,fct_s,bytes_sent,bytes_delivered
void write_report_csv(std::ostream& out, const RunReport& report);
/// Reads the per-flow columns back; packet counts are not part of the CSV.
std::vector<FlowRecord> read_report_csv(std::istream& in);
nlohmann::json aggregates_json(const RunReport& report);

}  // namespace kpflow::sim
