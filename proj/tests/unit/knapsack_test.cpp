#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "kpflow/errors.hpp"
#include "kpflow/knapsack.hpp"
#include "oracles.hpp"

namespace ks = kpflow::knapsack;
using kpflow::testing::brute_force_value;
using kpflow::testing::random_instance;

namespace {

ks::Instance make(std::initializer_list<std::pair<std::int64_t, std::int64_t>> wv,
                  std::int64_t cap) {
  ks::Instance inst;
  std::int64_t id = 0;
  for (auto [w, v] : wv) inst.items.push_back({id++, w, v});
  inst.capacity_kb = cap;
  return inst;
}

}  // namespace

TEST(KnapsackDp, EmptyInstance) {
  const auto s = ks::solve_exact_dp(make({}, 100));
  EXPECT_TRUE(s.selection.empty());
  EXPECT_EQ(s.total_value, 0);
}

TEST(KnapsackDp, SymmetricPairTakesOne) {
  const auto s = ks::solve_exact_dp(make({{5, 10}, {5, 10}}, 5));
  EXPECT_EQ(s.total_value, 10);
  EXPECT_EQ(std::count(s.selection.begin(), s.selection.end(), 1), 1);
}

TEST(KnapsackDp, RandomTwelveMatchesBruteForce) {
  std::mt19937_64 rng(12);
  const auto inst = random_instance(rng, {.n = 12, .w_lo = 1, .w_hi = 50});
  EXPECT_EQ(ks::solve_exact_dp(inst).total_value, brute_force_value(inst));
}

TEST(KnapsackDp, CapacityBudgetEnforced) {
  EXPECT_THROW(ks::solve_exact_dp(make({{1, 1}, {2, 2}}, 1000), 100), kpflow::CapacityTooLarge);
}

TEST(KnapsackDp, RejectsInvalidInstances) {
  EXPECT_THROW(ks::solve_exact_dp(make({{1, 1}}, -1)), kpflow::InvalidInstance);
  EXPECT_THROW(ks::solve_exact_dp(make({{1, 0}}, 5)), kpflow::InvalidInstance);
  EXPECT_THROW(ks::solve_exact_dp(make({{1, 256}}, 5)), kpflow::InvalidInstance);
  EXPECT_THROW(ks::solve_exact_dp(make({{-1, 3}}, 5)), kpflow::InvalidInstance);
}

TEST(KnapsackDp, ZeroWeightItemsAlwaysTaken) {
  const auto s = ks::solve_exact_dp(make({{0, 7}, {3, 1}, {0, 9}}, 0));
  EXPECT_EQ(s.total_value, 16);
  EXPECT_EQ(s.selection, (ks::Selection{1, 0, 1}));
}

TEST(KnapsackDp, AggregatesMatchSelection) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = random_instance(rng, {.n = 14});
    const auto s = ks::solve_exact_dp(inst);
    const auto re = ks::evaluate(inst, s.selection);
    EXPECT_EQ(s.total_value, re.total_value);
    EXPECT_EQ(s.total_weight_kb, re.total_weight_kb);
    EXPECT_TRUE(s.feasible(inst));
  }
}

TEST(KnapsackExhaustive, NothingFits) {
  const auto s = ks::solve_exhaustive(make({{1, 1}}, 0));
  EXPECT_EQ(s.selection, ks::Selection{0});
  EXPECT_EQ(s.total_value, 0);
}

TEST(KnapsackExhaustive, SingleItemFits) {
  const auto s = ks::solve_exhaustive(make({{1, 1}}, 1));
  EXPECT_EQ(s.selection, ks::Selection{1});
  EXPECT_EQ(s.total_value, 1);
}

TEST(KnapsackExhaustive, TooLarge) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(ks::solve_exhaustive(random_instance(rng, {.n = 26})), kpflow::InstanceTooLarge);
}

TEST(KnapsackExhaustive, AgreesWithDpAndTieBreak) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_instance(rng, {.n = 10, .w_lo = 1, .w_hi = 20, .v_lo = 1, .v_hi = 5});
    const auto dp = ks::solve_exact_dp(inst);
    const auto ex = ks::solve_exhaustive(inst);
    EXPECT_EQ(dp.total_value, ex.total_value);
    // Small value range makes ties common; both pick the same optimum.
    EXPECT_EQ(dp.selection, ex.selection);
  }
}

TEST(KnapsackGreedy, DominantDensity) {
  const auto s = ks::solve_greedy_ratio(make({{10, 100}, {10, 10}}, 10));
  EXPECT_EQ(s.selection, (ks::Selection{1, 0}));
  EXPECT_EQ(s.total_value, 100);
}

TEST(KnapsackGreedy, Empty) {
  EXPECT_TRUE(ks::solve_greedy_ratio(make({}, 0)).selection.empty());
}

TEST(KnapsackGreedy, LowerBoundOnDp) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_instance(rng, {.n = 12});
    const auto g = ks::solve_greedy_ratio(inst);
    EXPECT_TRUE(g.feasible(inst));
    EXPECT_LE(g.total_value, ks::solve_exact_dp(inst).total_value);
  }
}

TEST(KnapsackDensityOrder, ZeroWeightFirstThenRatioThenId) {
  const auto inst = make({{4, 4}, {0, 1}, {2, 4}, {1, 1}, {2, 2}}, 3);
  EXPECT_EQ(ks::density_order(inst), (std::vector<std::size_t>{1, 2, 0, 3, 4}));
}

TEST(KnapsackProperties, DpMatchesExhaustiveUpToFifteen) {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<std::size_t> n_dist(0, 15);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = random_instance(rng, {.n = n_dist(rng), .w_lo = 1, .w_hi = 200});
    const auto dp = ks::solve_exact_dp(inst);
    ASSERT_EQ(dp.total_value, ks::solve_exhaustive(inst).total_value);
    ASSERT_EQ(dp.total_value, brute_force_value(inst));
  }
}

TEST(KnapsackProperties, OptimumInvariantUnderPermutation) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng, {.n = 13});
    const auto before = ks::solve_exact_dp(inst).total_value;
    std::shuffle(inst.items.begin(), inst.items.end(), rng);
    EXPECT_EQ(ks::solve_exact_dp(inst).total_value, before);
  }
}

TEST(KnapsackProperties, AllFitMeansTakeAll) {
  std::mt19937_64 rng(4);
  auto inst = random_instance(rng, {.n = 20});
  std::int64_t total_w = 0, total_v = 0;
  for (const auto& it : inst.items) {
    total_w += it.weight_kb;
    total_v += it.value;
  }
  inst.capacity_kb = total_w;
  const auto s = ks::solve_exact_dp(inst);
  EXPECT_EQ(s.total_value, total_v);
  EXPECT_EQ(std::accumulate(s.selection.begin(), s.selection.end(), 0), 20);
}
