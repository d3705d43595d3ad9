#include <benchmark/benchmark.h>

#include "kpflow/config.hpp"
#include "kpflow/experiment.hpp"
#include "kpflow/fairshare.hpp"
#include "kpflow/rng.hpp"
#include "kpflow/simengine.hpp"

namespace {

void BM_MaxMinRates(benchmark::State& state) {
  const auto flows = static_cast<std::size_t>(state.range(0));
  kpflow::Rng rng = kpflow::make_rng({7});
  std::vector<double> caps(96);
  for (auto& c : caps) c = 125000.0 * static_cast<double>(kpflow::uniform_int(rng, 1, 4));
  std::vector<kpflow::sim::Demand> demands(flows);
  for (auto& d : demands) {
    const auto hops = kpflow::uniform_int(rng, 2, 6);
    for (std::int64_t h = 0; h < hops; ++h) {
      d.channels.push_back(static_cast<std::size_t>(kpflow::uniform_int(rng, 0, 95)));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(kpflow::sim::max_min_rates(caps, demands));
}
BENCHMARK(BM_MaxMinRates)->Arg(30)->Arg(300)->Arg(3000);

// One sweep cell end to end: workload, controller and simulation.
void BM_RunCell(benchmark::State& state) {
  auto cfg = kpflow::cli::parse_config("");
  const auto kind = state.range(0) == 0 ? kpflow::sched::SchedulerKind::size_kp_pso
                                        : kpflow::sched::SchedulerKind::ecmp;
  const auto topo = kpflow::cli::build_topology(cfg);
  const kpflow::cli::RunKey key{kind, kpflow::traffic::Stag{0.3, 0.3}, 1};
  for (auto _ : state) benchmark::DoNotOptimize(kpflow::cli::run_cell(cfg, topo, key));
  state.SetLabel(std::string(kpflow::sched::to_string(kind)));
}
BENCHMARK(BM_RunCell)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
