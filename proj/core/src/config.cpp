#include "kpflow/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "kpflow/errors.hpp"

namespace kpflow::cli {

namespace {

constexpr std::array<std::string_view, 35> kKeys{
    "topo.k",           "topo.edge_gbps",        "topo.agg_gbps",      "topo.core_gbps",
    "topo.loss_rate",   "traffic.flows",         "traffic.mf_fraction", "traffic.pattern",
    "traffic.seed",     "traffic.arrival",       "scheduler.kind",     "scheduler.threshold",
    "scheduler.hash_seed", "bpso.particles",     "bpso.iterations",    "bpso.c1",
    "bpso.c2",          "bpso.w_start",          "bpso.w_end",         "bpso.v_max",
    "bpso.q",           "bpso.seed",             "bpso.fill",             "tos.mf_threshold_kb", "tos.max_size_kb",
    "sim.seed",         "sim.packet_size_bytes", "sim.loss_rate",      "sim.time_resolution_s",
    "sim.timeline",     "patterns",              "seeds",              "output_dir",
    "schedulers",       "traffic.patterns"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = s.find(',');
    const auto item = trim(s.substr(0, pos));
    if (!item.empty()) out.push_back(item);
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

template <typename T>
T parse_int(std::string_view key, std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key), fmt::format("expected an integer, got '{}'", v));
  }
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const std::string s(v);
    const double out = std::stod(s, &used);
    if (used == s.size()) return out;
  } catch (const std::exception&) {
  }
  throw ConfigError(std::string(key), fmt::format("expected a number, got '{}'", v));
}

std::vector<std::uint64_t> parse_seeds(std::string_view key, std::string_view v) {
  std::vector<std::uint64_t> seeds;
  for (auto item : split_list(v)) {
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      seeds.push_back(parse_int<std::uint64_t>(key, item));
      continue;
    }
    const auto lo = parse_int<std::uint64_t>(key, trim(item.substr(0, dots)));
    const auto hi = parse_int<std::uint64_t>(key, trim(item.substr(dots + 2)));
    if (hi < lo) throw ConfigError(std::string(key), fmt::format("empty range '{}'", item));
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

}  // namespace

std::span<const std::string_view> known_keys() noexcept { return kKeys; }

void ExperimentConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view v = trim(raw);
  const std::string k_str(key);
  if (key == "topo.k") {
    k = parse_int<int>(key, v);
  } else if (key == "topo.edge_gbps") {
    capacities.edge_gbps = parse_real(key, v);
  } else if (key == "topo.agg_gbps") {
    capacities.agg_gbps = parse_real(key, v);
  } else if (key == "topo.core_gbps") {
    capacities.core_gbps = parse_real(key, v);
  } else if (key == "topo.loss_rate") {
    link_loss_rate = parse_real(key, v);
  } else if (key == "traffic.flows") {
    num_flows = parse_int<std::int64_t>(key, v);
  } else if (key == "traffic.mf_fraction") {
    mf_fraction = parse_real(key, v);
  } else if (key == "traffic.pattern" || key == "traffic.patterns" || key == "patterns") {
    patterns.clear();
    for (auto item : split_list(v)) {
      try {
        patterns.push_back(traffic::parse_pattern(item));
      } catch (const Error& e) {
        throw ConfigError(k_str, e.what());
      }
    }
  } else if (key == "traffic.seed") {
    traffic_seed = parse_int<std::uint64_t>(key, v);
  } else if (key == "traffic.arrival") {
    if (v == "none" || v == "concurrent") {
      arrival_window_s = 0.0;
    } else if (v.rfind("uniform:", 0) == 0) {
      arrival_window_s = parse_real(key, v.substr(8));
    } else {
      throw ConfigError(k_str, fmt::format("expected none or uniform:<window_s>, got '{}'", v));
    }
  } else if (key == "scheduler.kind" || key == "schedulers") {
    schedulers.clear();
    for (auto item : split_list(v)) {
      const auto kind = sched::parse_scheduler(item);
      if (!kind) {
        throw ConfigError(k_str, fmt::format("unknown scheduler '{}' (want size-kp-pso or ecmp)", item));
      }
      schedulers.push_back(*kind);
    }
  } else if (key == "scheduler.threshold") {
    detection.utilization_threshold = parse_real(key, v);
  } else if (key == "scheduler.hash_seed") {
    hash_seed = parse_int<std::uint64_t>(key, v);
  } else if (key == "bpso.particles") {
    bpso.num_particles = parse_int<std::size_t>(key, v);
  } else if (key == "bpso.iterations") {
    bpso.max_iterations = parse_int<std::size_t>(key, v);
  } else if (key == "bpso.c1") {
    bpso.c1 = parse_real(key, v);
  } else if (key == "bpso.c2") {
    bpso.c2 = parse_real(key, v);
  } else if (key == "bpso.w_start") {
    bpso.inertia_start = parse_real(key, v);
  } else if (key == "bpso.w_end") {
    bpso.inertia_end = parse_real(key, v);
  } else if (key == "bpso.v_max") {
    bpso.v_max = parse_real(key, v);
    bpso.v_min = -bpso.v_max;
  } else if (key == "bpso.q") {
    if (v == "auto") {
      bpso.penalty_q.reset();
    } else {
      bpso.penalty_q = parse_real(key, v);
    }
  } else if (key == "bpso.fill") {
    if (v == "on" || v == "true" || v == "1") {
      bpso.fill_slack = true;
    } else if (v == "off" || v == "false" || v == "0") {
      bpso.fill_slack = false;
    } else {
      throw ConfigError(k_str, fmt::format("expected on or off, got '{}'", v));
    }
  } else if (key == "bpso.seed") {
    bpso.rng_seed = parse_int<std::uint64_t>(key, v);
  } else if (key == "tos.mf_threshold_kb") {
    tos.mf_threshold_kb = parse_int<std::int64_t>(key, v);
  } else if (key == "tos.max_size_kb") {
    tos.max_size_kb = parse_int<std::int64_t>(key, v);
  } else if (key == "sim.seed") {
    sim.rng_seed = parse_int<std::uint64_t>(key, v);
  } else if (key == "sim.packet_size_bytes") {
    sim.packet_size_bytes = parse_int<std::int64_t>(key, v);
  } else if (key == "sim.loss_rate") {
    sim_loss_rate = parse_real(key, v);
  } else if (key == "sim.time_resolution_s") {
    sim.time_resolution_s = parse_real(key, v);
  } else if (key == "sim.timeline") {
    sim.timeline_s.clear();
    for (auto item : split_list(v)) sim.timeline_s.push_back(parse_real(key, item));
  } else if (key == "seeds") {
    seeds = parse_seeds(key, v);
  } else if (key == "output_dir") {
    output_dir = std::string(v);
  } else {
    throw ConfigError(k_str, "unknown configuration key");
  }
}

void ExperimentConfig::validate() const {
  if (k < 2 || k % 2 != 0) throw ConfigError("topo.k", "must be even and >= 2");
  if (!(capacities.edge_gbps > 0.0)) throw ConfigError("topo.edge_gbps", "must be > 0");
  if (!(capacities.agg_gbps > 0.0)) throw ConfigError("topo.agg_gbps", "must be > 0");
  if (!(capacities.core_gbps > 0.0)) throw ConfigError("topo.core_gbps", "must be > 0");
  if (!(link_loss_rate >= 0.0 && link_loss_rate <= 1.0)) {
    throw ConfigError("topo.loss_rate", "must lie in [0, 1]");
  }
  if (num_flows < 0) throw ConfigError("traffic.flows", "must be >= 0");
  if (!(mf_fraction >= 0.0 && mf_fraction <= 1.0)) {
    throw ConfigError("traffic.mf_fraction", "must lie in [0, 1]");
  }
  if (arrival_window_s < 0.0) throw ConfigError("traffic.arrival", "window must be >= 0");
  if (patterns.empty()) throw ConfigError("patterns", "at least one traffic pattern is required");
  if (seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
  if (schedulers.empty()) throw ConfigError("scheduler.kind", "at least one scheduler is required");
  detection.validate();
  try {
    bpso.validate();
  } catch (const Error& e) {
    throw ConfigError("bpso", e.what());
  }
  try {
    tos.validate();
  } catch (const Error& e) {
    throw ConfigError("tos", e.what());
  }
  try {
    sim::SimConfig s = sim;
    s.loss_rate = effective_loss_rate();
    s.validate();
  } catch (const Error& e) {
    throw ConfigError("sim", e.what());
  }
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

ExperimentConfig parse_config(std::string_view text, std::span<const std::string> overrides) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", fmt::format("line {}: expected key = value", line_no));
    }
    cfg.set(trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(o, "override must have the form key=value");
    }
    cfg.set(trim(std::string_view(o).substr(0, eq)), std::string_view(o).substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

}  // namespace kpflow::cli
