#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kpflow/config.hpp"
#include "kpflow/schedulers.hpp"
#include "kpflow/simengine.hpp"
#include "kpflow/topology.hpp"
#include "kpflow/traffic.hpp"

namespace kpflow::cli {

/// One sweep cell.
struct RunKey {
  sched::SchedulerKind scheduler = sched::SchedulerKind::size_kp_pso;
  traffic::TrafficPattern pattern = traffic::RandomPattern{};
  std::uint64_t seed = 0;

  /// File stem, e.g. "size-kp-pso__stag-0.3-0.3__seed1".
  std::string stem() const;
};

/// Workload and decisions for a cell before simulation.
struct PlannedRun {
  std::vector<traffic::Flow> flows;
  std::vector<sched::ScheduleDecision> decisions;
  std::size_t groups_scheduled = 0;
};

topo::Topology build_topology(const ExperimentConfig& cfg);

/// The controller loop for Size-KP-PSO: default ECMP forwarding, then for
/// every sender (host order) repeatedly detect the largest parallel group on
/// its uplink and replace those flows' decisions with the two-phase plan.
/// Updates each flow's phase and ToS tag in place.
std::vector<sched::ScheduleDecision> plan_size_kp_pso(std::vector<traffic::Flow>& flows,
                                                      const topo::Topology& topo,
                                                      const ExperimentConfig& cfg,
                                                      std::uint64_t run_seed,
                                                      std::size_t* groups_scheduled = nullptr);

/// Generates the workload for `key` and plans it. Both schedulers see the
/// same flows for the same (pattern, seed).
PlannedRun plan_run(const ExperimentConfig& cfg, const topo::Topology& topo, const RunKey& key);

sim::SimConfig sim_config_for(const ExperimentConfig& cfg, std::uint64_t run_seed);

sim::RunReport run_cell(const ExperimentConfig& cfg, const topo::Topology& topo,
                        const RunKey& key);

/// Metric names in table order.
std::span<const std::string_view> table_metrics() noexcept;
/// The per-run value of a table metric.
double metric_value(const sim::RunReport& report, std::string_view metric);

struct TableRow {
  std::string scheduler;
  std::string pattern;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample (n - 1) convention; 0 when n == 1
  std::int64_t n = 0;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

struct ComparisonTable {
  std::vector<TableRow> rows;
  friend bool operator==(const ComparisonTable&, const ComparisonTable&) = default;
};

struct Cell {
  RunKey key;
  /// Per-run metric values keyed like table_metrics().
  std::vector<double> metrics;
};

/// Mean and sample standard deviation per (scheduler, pattern, metric), in
/// the order cells first appear.
ComparisonTable aggregate(const std::vector<Cell>& cells);

enum class TableFormat { csv, json, text };
std::optional<TableFormat> parse_table_format(std::string_view text) noexcept;

/// Columns scheduler,pattern,metric,mean,stddev,n. Throws Error for an
/// empty table.
std::string emit_table(const ComparisonTable& table, TableFormat format);
ComparisonTable parse_table_csv(std::string_view text);
ComparisonTable parse_table_json(std::string_view text);

struct ExperimentResult {
  std::vector<RunKey> runs;
  std::vector<sim::RunReport> reports;
  ComparisonTable table;
};

/// Runs every (scheduler, pattern, seed) cell on up to `jobs` threads. When
/// `write_outputs` is set, writes under cfg.output_dir:
///   runs/<stem>.csv, runs/<stem>.json   per-run reports
///   workloads/<pattern>__seed<k>.csv     generated workloads
///   manifest.json                        run list in sweep order
///   table.csv, table.json                comparison table
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs = 1,
                                bool write_outputs = true);

/// Rebuilds the comparison table from the per-run JSON files listed in
/// <dir>/manifest.json. Throws IoError.
ComparisonTable table_from_dir(const std::filesystem::path& dir);

}  // namespace kpflow::cli
