// kpflow: experiment runner for flow-level scheduling sweeps.
//
//   kpflow run --config <file> [--set k=v]... [--jobs N] [--dump-topology] [--out DIR]
//   kpflow table --in DIR --format csv|json|text
//   kpflow bench-bpso --instances N --n-items K [--seed S] [--no-fill]
//
// Exit codes: 0 ok, 1 configuration error, 2 runtime error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "kpflow/bpso.hpp"
#include "kpflow/errors.hpp"
#include "kpflow/experiment.hpp"
#include "kpflow/knapsack.hpp"
#include "kpflow/rng.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct RunOptions {
  std::string config;
  std::vector<std::string> overrides;
  unsigned jobs = 1;
  bool dump_topology = false;
  std::string out;
};

int cmd_run(const RunOptions& opts) {
  kpflow::cli::ExperimentConfig cfg;
  try {
    cfg = kpflow::cli::load_config(opts.config, opts.overrides);
  } catch (const kpflow::IoError& e) {
    throw kpflow::ConfigError("--config", e.what());
  }
  if (!opts.out.empty()) cfg.output_dir = opts.out;

  const auto started = std::chrono::steady_clock::now();
  const auto result = kpflow::cli::run_experiment(cfg, opts.jobs, true);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (opts.dump_topology) {
    std::ofstream out(cfg.output_dir / "topology.json");
    if (!out) throw kpflow::IoError("cannot write topology.json");
    out << kpflow::topo::to_json(kpflow::cli::build_topology(cfg)).dump(2) << '\n';
  }
  std::cout << kpflow::cli::emit_table(result.table, kpflow::cli::TableFormat::text);
  std::cerr << fmt::format("{} runs in {:.2f} s; outputs in {}\n", result.runs.size(), secs,
                           cfg.output_dir.string());
  return 0;
}

int cmd_table(const std::string& in, const std::string& format) {
  const auto fmt_kind = kpflow::cli::parse_table_format(format);
  if (!fmt_kind) throw kpflow::ConfigError("--format", "expected csv, json or text");
  std::cout << kpflow::cli::emit_table(kpflow::cli::table_from_dir(in), *fmt_kind);
  return 0;
}

int cmd_bench_bpso(std::size_t instances, std::size_t n_items, std::uint64_t seed, bool fill) {
  if (instances == 0 || n_items == 0) {
    throw kpflow::ConfigError("--instances/--n-items", "must be >= 1");
  }
  kpflow::Rng rng = kpflow::make_rng({seed, 0xb50});
  std::vector<double> ratios;
  std::size_t infeasible = 0;
  const auto started = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < instances; ++k) {
    kpflow::knapsack::Instance inst;
    std::int64_t total = 0;
    for (std::size_t i = 0; i < n_items; ++i) {
      const auto w = kpflow::uniform_int(rng, 1, 1000);
      const auto v = kpflow::uniform_int(rng, 1, 255);
      inst.items.push_back({static_cast<std::int64_t>(i), w, v});
      total += w;
    }
    inst.capacity_kb = total / 2;
    kpflow::bpso::Config cfg;
    cfg.rng_seed = kpflow::derive_seed({seed, k});
    cfg.fill_slack = fill;
    const auto result = kpflow::bpso::solve(inst, cfg);
    const auto got = kpflow::knapsack::evaluate(inst, result.best_position);
    const auto opt = kpflow::knapsack::solve_exact_dp(inst);
    if (!got.feasible(inst)) ++infeasible;
    ratios.push_back(opt.total_value == 0 ? 1.0
                                          : static_cast<double>(got.total_value) /
                                                static_cast<double>(opt.total_value));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(ratios.size());
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  std::cout << fmt::format(
      "instances={} n_items={} mean_ratio={:.6f} min_ratio={:.6f} max_ratio={:.6f} "
      "infeasible={} seconds={:.3f}\n",
      instances, n_items, mean, *lo, *hi, infeasible, secs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kpflow: knapsack/BPSO flow scheduling simulator"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run a scheduler x pattern x seed sweep");
  run->add_option("--config", run_opts.config, "Config file (key = value lines)")->required();
  run->add_option("--set", run_opts.overrides, "Override a config key (key=value)");
  run->add_option("--jobs", run_opts.jobs, "Concurrent sweep cells")->check(CLI::PositiveNumber);
  run->add_flag("--dump-topology", run_opts.dump_topology, "Write topology.json");
  run->add_option("--out", run_opts.out, "Output directory (overrides output_dir)");

  std::string table_in;
  std::string table_format = "text";
  auto* table = app.add_subcommand("table", "Rebuild the comparison table from run reports");
  table->add_option("--in", table_in, "Directory written by `kpflow run`")->required();
  table->add_option("--format", table_format, "csv | json | text");

  std::size_t instances = 50;
  std::size_t n_items = 20;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench-bpso", "BPSO value over the exact DP optimum");
  bench->add_option("--instances", instances, "Random instances");
  bench->add_option("--n-items", n_items, "Items per instance");
  bench->add_option("--seed", bench_seed, "Instance and swarm seed");
  bool no_fill = false;
  bench->add_flag("--no-fill", no_fill, "Report the bare swarm without the slack fill");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*table) return cmd_table(table_in, table_format);
    if (*bench) return cmd_bench_bpso(instances, n_items, bench_seed, !no_fill);
  } catch (const kpflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
