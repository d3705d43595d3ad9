#include "kpflow/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "kpflow/errors.hpp"
#include "kpflow/rng.hpp"

namespace kpflow::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 5> kMetrics{"plr_percent", "mf_fct_s", "ef_fct_s",
                                                   "goodput", "packet_size_bytes"};

std::string workload_stem(const traffic::TrafficPattern& pattern, std::uint64_t seed) {
  return fmt::format("{}__seed{}", traffic::slug(pattern), seed);
}

void write_file(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string RunKey::stem() const {
  return fmt::format("{}__{}__seed{}", sched::to_string(scheduler), traffic::slug(pattern), seed);
}

topo::Topology build_topology(const ExperimentConfig& cfg) {
  return topo::build_fat_tree(cfg.k, cfg.capacities, cfg.link_loss_rate);
}

std::vector<sched::ScheduleDecision> plan_size_kp_pso(std::vector<traffic::Flow>& flows,
                                                      const topo::Topology& topo,
                                                      const ExperimentConfig& cfg,
                                                      std::uint64_t run_seed,
                                                      std::size_t* groups_scheduled) {
  auto decisions = sched::schedule_ecmp(flows, topo, cfg.hash_seed);
  const auto utilization = sim::uplink_utilization(topo, flows, decisions);

  std::map<std::int64_t, std::size_t> index_of;
  for (std::size_t i = 0; i < flows.size(); ++i) index_of[flows[i].id] = i;
  for (auto& f : flows) f.phase = traffic::Phase::unscheduled;

  std::size_t groups = 0;
  const auto& hosts = topo.hosts();
  for (std::size_t h = 0; h < hosts.size(); ++h) {
    std::vector<traffic::Flow> pending;
    for (const auto& f : flows) {
      if (f.src_host == hosts[h]) pending.push_back(f);
    }
    while (auto group = sched::detect_parallel_group(pending, utilization[h], cfg.detection)) {
      bpso::Config bcfg = cfg.bpso;
      bcfg.rng_seed = derive_seed({cfg.bpso.rng_seed, run_seed,
                                   static_cast<std::uint64_t>(group->front().src_host),
                                   static_cast<std::uint64_t>(group->front().dst_host)});
      const auto plan = sched::schedule_size_kp_pso(*group, topo, cfg.tos, bcfg);
      for (const auto& d : plan) {
        const std::size_t i = index_of.at(d.flow_id);
        decisions[i] = d;
        flows[i].phase = d.phase == sched::kSelectedPhase ? traffic::Phase::selected
                                                          : traffic::Phase::non_selected;
        flows[i].tos_value = tos::tag(flows[i].size_kb, cfg.tos);
      }
      const auto dst = group->front().dst_host;
      std::erase_if(pending, [&](const traffic::Flow& f) { return f.dst_host == dst; });
      ++groups;
    }
  }
  if (groups_scheduled != nullptr) *groups_scheduled = groups;
  return decisions;
}

PlannedRun plan_run(const ExperimentConfig& cfg, const topo::Topology& topo, const RunKey& key) {
  traffic::WorkloadSpec spec;
  spec.num_flows = cfg.num_flows;
  spec.mf_fraction = cfg.mf_fraction;
  spec.pattern = key.pattern;
  spec.rng_seed = derive_seed({cfg.traffic_seed, key.seed});
  spec.arrival_window_s = cfg.arrival_window_s;

  PlannedRun run;
  run.flows = traffic::generate(spec, topo);
  if (key.scheduler == sched::SchedulerKind::ecmp) {
    run.decisions = sched::schedule_ecmp(run.flows, topo, cfg.hash_seed);
  } else {
    run.decisions = plan_size_kp_pso(run.flows, topo, cfg, key.seed, &run.groups_scheduled);
  }
  return run;
}

sim::SimConfig sim_config_for(const ExperimentConfig& cfg, std::uint64_t run_seed) {
  sim::SimConfig s = cfg.sim;
  s.loss_rate = cfg.effective_loss_rate();
  s.rng_seed = derive_seed({cfg.sim.rng_seed, run_seed});
  return s;
}

sim::RunReport run_cell(const ExperimentConfig& cfg, const topo::Topology& topo,
                        const RunKey& key) {
  const PlannedRun plan = plan_run(cfg, topo, key);
  return sim::run(topo, plan.flows, plan.decisions, sim_config_for(cfg, key.seed));
}

std::span<const std::string_view> table_metrics() noexcept { return kMetrics; }

double metric_value(const sim::RunReport& report, std::string_view metric) {
  if (metric == "plr_percent") return report.plr_percent;
  if (metric == "mf_fct_s") return report.mean_mf_fct_s;
  if (metric == "ef_fct_s") return report.mean_ef_fct_s;
  if (metric == "goodput") return report.goodput;
  if (metric == "packet_size_bytes") return report.mean_packet_size_bytes;
  throw Error(fmt::format("unknown metric '{}'", metric));
}

ComparisonTable aggregate(const std::vector<Cell>& cells) {
  struct Acc {
    std::string scheduler;
    std::string pattern;
    std::vector<std::vector<double>> values;
  };
  std::vector<Acc> groups;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const Cell& c : cells) {
    std::pair<std::string, std::string> key{std::string(sched::to_string(c.key.scheduler)),
                                            traffic::to_string(c.key.pattern)};
    auto [it, inserted] = index.try_emplace(key, groups.size());
    if (inserted) groups.push_back({key.first, key.second, std::vector<std::vector<double>>(kMetrics.size())});
    for (std::size_t m = 0; m < kMetrics.size(); ++m) {
      groups[it->second].values[m].push_back(c.metrics.at(m));
    }
  }

  ComparisonTable table;
  for (const Acc& g : groups) {
    for (std::size_t m = 0; m < kMetrics.size(); ++m) {
      const auto& xs = g.values[m];
      const auto n = static_cast<double>(xs.size());
      double sum = 0.0;
      for (double x : xs) sum += x;
      const double mean = sum / n;
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      const double sd = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      table.rows.push_back({g.scheduler, g.pattern, std::string(kMetrics[m]), mean, sd,
                            static_cast<std::int64_t>(xs.size())});
    }
  }
  return table;
}

std::optional<TableFormat> parse_table_format(std::string_view text) noexcept {
  if (text == "csv") return TableFormat::csv;
  if (text == "json") return TableFormat::json;
  if (text == "text") return TableFormat::text;
  return std::nullopt;
}

std::string emit_table(const ComparisonTable& table, TableFormat format) {
  if (table.rows.empty()) throw Error("cannot emit an empty comparison table");
  std::string out;
  switch (format) {
    case TableFormat::csv:
      out = "scheduler,pattern,metric,mean,stddev,n\n";
      for (const auto& r : table.rows) {
        out += fmt::format("{},{},{},{},{},{}\n", r.scheduler, r.pattern, r.metric, r.mean,
                           r.stddev, r.n);
      }
      break;
    case TableFormat::json: {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : table.rows) {
        rows.push_back({{"scheduler", r.scheduler},
                        {"pattern", r.pattern},
                        {"metric", r.metric},
                        {"mean", r.mean},
                        {"stddev", r.stddev},
                        {"n", r.n}});
      }
      out = rows.dump(2) + "\n";
      break;
    }
    case TableFormat::text:
      out = fmt::format("{:<12} {:<14} {:<18} {:>16} {:>14} {:>4}\n", "scheduler", "pattern",
                        "metric", "mean", "stddev", "n");
      for (const auto& r : table.rows) {
        out += fmt::format("{:<12} {:<14} {:<18} {:>16.6f} {:>14.6f} {:>4}\n", r.scheduler,
                           r.pattern, r.metric, r.mean, r.stddev, r.n);
      }
      break;
  }
  return out;
}

ComparisonTable parse_table_csv(std::string_view text) {
  ComparisonTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "scheduler,pattern,metric,mean,stddev,n") {
    throw IoError("table CSV has an unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    if (cols.size() != 6) throw IoError("table CSV row with wrong column count: " + line);
    try {
      table.rows.push_back({cols[0], cols[1], cols[2], std::stod(cols[3]), std::stod(cols[4]),
                            std::stoll(cols[5])});
    } catch (const std::exception&) {
      throw IoError("table CSV row with bad numbers: " + line);
    }
  }
  return table;
}

ComparisonTable parse_table_json(std::string_view text) {
  ComparisonTable table;
  try {
    for (const auto& r : nlohmann::json::parse(text)) {
      table.rows.push_back({r.at("scheduler").get<std::string>(), r.at("pattern").get<std::string>(),
                            r.at("metric").get<std::string>(), r.at("mean").get<double>(),
                            r.at("stddev").get<double>(), r.at("n").get<std::int64_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad table JSON: ") + e.what());
  }
  return table;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs, bool write_outputs) {
  cfg.validate();
  const topo::Topology topo = build_topology(cfg);

  ExperimentResult result;
  for (auto s : cfg.schedulers) {
    for (const auto& p : cfg.patterns) {
      for (auto seed : cfg.seeds) result.runs.push_back({s, p, seed});
    }
  }
  result.reports.resize(result.runs.size());

  const fs::path runs_dir = cfg.output_dir / "runs";
  const fs::path workloads_dir = cfg.output_dir / "workloads";
  if (write_outputs) {
    std::error_code ec;
    fs::create_directories(runs_dir, ec);
    fs::create_directories(workloads_dir, ec);
    if (!fs::is_directory(runs_dir) || !fs::is_directory(workloads_dir)) {
      throw IoError("cannot create output directory " + cfg.output_dir.string());
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < result.runs.size(); i = next++) {
      try {
        const RunKey& key = result.runs[i];
        const PlannedRun plan = plan_run(cfg, topo, key);
        result.reports[i] = sim::run(topo, plan.flows, plan.decisions, sim_config_for(cfg, key.seed));
        if (!write_outputs) continue;
        std::ostringstream csv;
        sim::write_report_csv(csv, result.reports[i]);
        write_file(runs_dir / (key.stem() + ".csv"), csv.str());
        nlohmann::json agg = sim::aggregates_json(result.reports[i]);
        agg["scheduler"] = std::string(sched::to_string(key.scheduler));
        agg["pattern"] = traffic::to_string(key.pattern);
        agg["seed"] = key.seed;
        agg["groups_scheduled"] = plan.groups_scheduled;
        write_file(runs_dir / (key.stem() + ".json"), agg.dump(2) + "\n");
        if (key.scheduler == cfg.schedulers.front()) {
          std::ostringstream wl;
          traffic::write_workload_csv(wl, plan.flows);
          write_file(workloads_dir / (workload_stem(key.pattern, key.seed) + ".csv"), wl.str());
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = result.runs.size();
      }
    }
  };

  const unsigned threads = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(result.runs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<Cell> cells;
  cells.reserve(result.runs.size());
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    Cell c{result.runs[i], {}};
    for (auto m : kMetrics) c.metrics.push_back(metric_value(result.reports[i], m));
    cells.push_back(std::move(c));
  }
  result.table = aggregate(cells);

  if (write_outputs) {
    nlohmann::json manifest;
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& key : result.runs) {
      runs.push_back({{"stem", key.stem()},
                      {"scheduler", std::string(sched::to_string(key.scheduler))},
                      {"pattern", traffic::to_string(key.pattern)},
                      {"seed", key.seed}});
    }
    manifest["runs"] = std::move(runs);
    manifest["packet_size_bytes"] = cfg.sim.packet_size_bytes;
    write_file(cfg.output_dir / "manifest.json", manifest.dump(2) + "\n");
    write_file(cfg.output_dir / "table.csv", emit_table(result.table, TableFormat::csv));
    write_file(cfg.output_dir / "table.json", emit_table(result.table, TableFormat::json));
  }
  return result;
}

ComparisonTable table_from_dir(const fs::path& dir) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad manifest.json: ") + e.what());
  }
  std::vector<Cell> cells;
  try {
    for (const auto& run : manifest.at("runs")) {
      Cell c;
      const auto kind = sched::parse_scheduler(run.at("scheduler").get<std::string>());
      if (!kind) throw IoError("manifest names an unknown scheduler");
      c.key.scheduler = *kind;
      c.key.pattern = traffic::parse_pattern(run.at("pattern").get<std::string>());
      c.key.seed = run.at("seed").get<std::uint64_t>();
      const auto agg = nlohmann::json::parse(
          read_file(dir / "runs" / (run.at("stem").get<std::string>() + ".json")));
      c.metrics = {agg.at("plr_percent").get<double>(), agg.at("mean_mf_fct_s").get<double>(),
                   agg.at("mean_ef_fct_s").get<double>(), agg.at("goodput").get<double>(),
                   agg.at("mean_packet_size_bytes").get<double>()};
      cells.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad run report: ") + e.what());
  }
  if (cells.empty()) throw IoError("manifest lists no runs");
  return aggregate(cells);
}

}  // namespace kpflow::cli
