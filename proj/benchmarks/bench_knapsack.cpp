#include <benchmark/benchmark.h>

#include "kpflow/bpso.hpp"
#include "kpflow/knapsack.hpp"
#include "kpflow/rng.hpp"

namespace {

kpflow::knapsack::Instance make_instance(std::size_t n, std::uint64_t seed) {
  kpflow::Rng rng = kpflow::make_rng({seed});
  kpflow::knapsack::Instance inst;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = kpflow::uniform_int(rng, 1, 1000);
    inst.items.push_back({static_cast<std::int64_t>(i), w, kpflow::uniform_int(rng, 1, 255)});
    total += w;
  }
  inst.capacity_kb = total / 2;
  return inst;
}

void BM_BpsoSolve(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), 1);
  kpflow::bpso::Config cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kpflow::bpso::solve(inst, cfg));
    ++cfg.rng_seed;
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BpsoSolve)->Arg(20)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_ExactDp(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(kpflow::knapsack::solve_exact_dp(inst));
}
BENCHMARK(BM_ExactDp)->Arg(20)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_Exhaustive(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(kpflow::knapsack::solve_exhaustive(inst));
}
BENCHMARK(BM_Exhaustive)->Arg(10)->Arg(15)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
