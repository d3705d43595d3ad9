#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kpflow/bpso.hpp"
#include "kpflow/schedulers.hpp"
#include "kpflow/simengine.hpp"
#include "kpflow/topology.hpp"
#include "kpflow/tos.hpp"
#include "kpflow/traffic.hpp"

namespace kpflow::cli {

/// Everything one sweep needs. Loaded from a flat `key = value` file; every
/// key can also be overridden with `--set key=value`.
struct ExperimentConfig {
  // topo.*
  int k = 4;
  topo::LayerCapacities capacities;
  double link_loss_rate = 0.01;

  // traffic.*
  std::int64_t num_flows = 300;
  double mf_fraction = 0.9;
  std::uint64_t traffic_seed = 0;
  double arrival_window_s = 0.0;

  // scheduler.*
  std::vector<sched::SchedulerKind> schedulers{sched::SchedulerKind::size_kp_pso,
                                               sched::SchedulerKind::ecmp};
  sched::DetectionConfig detection;
  std::uint64_t hash_seed = 0;

  bpso::Config bpso;
  tos::TosTable tos;
  sim::SimConfig sim;
  /// sim.loss_rate when set explicitly; otherwise topo.loss_rate applies.
  std::optional<double> sim_loss_rate;

  std::vector<traffic::TrafficPattern> patterns{
      traffic::Stag{0.3, 0.3}, traffic::Stag{0.5, 0.3}, traffic::RandomPattern{},
      traffic::Stride{1}, traffic::Stride{4}};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::filesystem::path output_dir = "kpflow-out";

  double effective_loss_rate() const noexcept { return sim_loss_rate.value_or(link_loss_rate); }

  /// Applies one key; throws ConfigError naming the key.
  void set(std::string_view key, std::string_view value);
  /// Cross-field checks; throws ConfigError naming the key.
  void validate() const;
};

/// Parses `key = value` lines ('#' starts a comment), then applies each
/// `key=value` override in order.
ExperimentConfig parse_config(std::string_view text, std::span<const std::string> overrides = {});

/// Reads `path` and parses it. Throws IoError when it cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::span<const std::string> overrides = {});

/// Every key understood by ExperimentConfig::set.
std::span<const std::string_view> known_keys() noexcept;

}  // namespace kpflow::cli
