#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "kpflow/errors.hpp"
#include "kpflow/schedulers.hpp"

namespace sc = kpflow::sched;
namespace tr = kpflow::traffic;
namespace topo = kpflow::topo;

namespace {

tr::Flow flow(std::int64_t id, topo::NodeId s, topo::NodeId d, std::int64_t size) {
  tr::Flow f;
  f.id = id;
  f.src_host = s;
  f.dst_host = d;
  f.size_kb = size;
  return f;
}

sc::DetectionConfig cfg{};

}  // namespace

TEST(LinkUtilization, Examples) {
  EXPECT_DOUBLE_EQ(sc::link_utilization(700000, 1000000), 0.7);
  EXPECT_DOUBLE_EQ(sc::link_utilization(0, 1000000), 0.0);
  EXPECT_DOUBLE_EQ(sc::link_utilization(1000000, 1000000), 1.0);
  EXPECT_THROW(sc::link_utilization(5, 0), kpflow::ZeroCapacity);
}

TEST(Detect, BelowThreshold) {
  const std::vector<tr::Flow> flows{flow(0, 0, 1, 5), flow(1, 0, 1, 5)};
  EXPECT_FALSE(sc::detect_parallel_group(flows, 0.69, cfg));
}

TEST(Detect, WholeGroupAtThreshold) {
  std::vector<tr::Flow> flows;
  for (int i = 0; i < 300; ++i) flows.push_back(flow(i, 0, 5, 10));
  const auto g = sc::detect_parallel_group(flows, 0.7, cfg);
  ASSERT_TRUE(g);
  EXPECT_EQ(g->size(), 300u);
}

TEST(Detect, DistinctKeysGiveNothing) {
  const std::vector<tr::Flow> flows{flow(0, 0, 1, 5), flow(1, 0, 2, 5), flow(2, 1, 0, 5)};
  EXPECT_FALSE(sc::detect_parallel_group(flows, 0.9, cfg));
}

TEST(Detect, LargestGroupThenSmallestKey) {
  const std::vector<tr::Flow> flows{flow(0, 3, 4, 5), flow(1, 0, 2, 5), flow(2, 3, 4, 5),
                                    flow(3, 0, 2, 5), flow(4, 1, 2, 5)};
  const auto g = sc::detect_parallel_group(flows, 1.0, cfg);
  ASSERT_TRUE(g);
  ASSERT_EQ(g->size(), 2u);
  EXPECT_EQ((*g)[0].id, 1);
  EXPECT_EQ((*g)[1].id, 3);
}

TEST(BuildInstance, WeightsValuesCapacity) {
  const auto t = topo::build_fat_tree(4);
  const auto& h = t.hosts();
  const std::vector<tr::Flow> g{flow(7, h[0], h[1], 50), flow(9, h[0], h[1], 889)};
  const auto inst = sc::build_instance(g, t, {});
  EXPECT_EQ(inst.capacity_kb, 1'000'000);
  ASSERT_EQ(inst.items.size(), 2u);
  EXPECT_EQ(inst.items[0].id, 7);
  EXPECT_EQ(inst.items[0].value, 255);
  EXPECT_EQ(inst.items[1].weight_kb, 889);
  EXPECT_EQ(inst.items[1].value, 253);
  const std::vector<tr::Flow> mixed{flow(0, h[0], h[1], 5), flow(1, h[0], h[2], 5)};
  EXPECT_THROW(sc::build_instance(mixed, t, {}), kpflow::InvalidGroup);
  EXPECT_THROW(sc::build_instance({}, t, {}), kpflow::InvalidGroup);
}

TEST(SizeKpPso, SingleMouseSelected) {
  const auto t = topo::build_fat_tree(4);
  const auto& h = t.hosts();
  const std::vector<tr::Flow> g{flow(0, h[0], h[1], 50)};
  const auto d = sc::schedule_size_kp_pso(g, t, {}, {});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].phase, sc::kSelectedPhase);
  EXPECT_EQ(d[0].priority, sc::kSelectedPriority);
  EXPECT_EQ(d[0].path, (topo::Path{h[0], t.edge_switch_of(h[0]), h[1]}));
}

TEST(SizeKpPso, EverythingFitsAllPhaseZero) {
  const auto t = topo::build_fat_tree(4);
  const auto& h = t.hosts();
  std::vector<tr::Flow> g;
  for (int i = 0; i < 20; ++i) g.push_back(flow(i, h[0], h[9], 1000 + 37 * i));
  for (const auto& d : sc::schedule_size_kp_pso(g, t, {}, {})) {
    EXPECT_EQ(d.phase, sc::kSelectedPhase);
  }
}

TEST(SizeKpPso, MiceAllSelectedUnderPressure) {
  // 270 mice and 30 elephants of 60 MB on a 1 GB same-edge budget.
  const auto t = topo::build_fat_tree(4);
  const auto& h = t.hosts();
  std::vector<tr::Flow> g;
  for (int i = 0; i < 300; ++i) {
    g.push_back(flow(i, h[0], h[1], i < 270 ? 1 + i % 100 : 60000));
  }
  const auto inst = sc::build_instance(g, t, {});
  const auto dp = kpflow::knapsack::solve_exact_dp(inst, 400'000'000);
  for (int i = 0; i < 270; ++i) EXPECT_EQ(dp.selection[i], 1) << "dp mouse " << i;

  const auto d = sc::schedule_size_kp_pso(g, t, {}, {});
  std::int64_t phase0_kb = 0;
  int phase1_elephants = 0;
  for (int i = 0; i < 300; ++i) {
    if (d[i].phase == sc::kSelectedPhase) phase0_kb += g[i].size_kb;
    if (i < 270) {
      EXPECT_EQ(d[i].phase, sc::kSelectedPhase) << "mouse " << i;
    }
    if (i >= 270 && d[i].phase == sc::kNonSelectedPhase) ++phase1_elephants;
  }
  EXPECT_LE(phase0_kb, 1'000'000);
  EXPECT_GT(phase1_elephants, 0);
}

TEST(Ecmp, SinglePathSameEdge) {
  const auto t = topo::build_fat_tree(4);
  const auto& h = t.hosts();
  std::vector<tr::Flow> flows;
  for (int i = 0; i < 10; ++i) flows.push_back(flow(i, h[2], h[3], 10));
  for (const auto& d : sc::schedule_ecmp(flows, t, 1)) {
    EXPECT_EQ(d.path.size(), 3u);
    EXPECT_EQ(d.phase, sc::kSelectedPhase);
    EXPECT_EQ(d.priority, sc::kDefaultPriority);
  }
}

TEST(Ecmp, BalancedInterPod) {
  const auto t = topo::build_fat_tree(4);
  const auto& h = t.hosts();
  const int n = 10000;
  std::vector<tr::Flow> flows;
  for (int i = 0; i < n; ++i) flows.push_back(flow(i, h[0], h[12], 10));
  std::map<topo::Path, int> counts;
  for (const auto& d : sc::schedule_ecmp(flows, t, 42)) ++counts[d.path];
  ASSERT_EQ(counts.size(), 4u);
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (const auto& [path, c] : counts) EXPECT_LE(std::abs(c - n / 4.0), 3 * sigma);
}

TEST(Ecmp, HashStable) {
  EXPECT_EQ(sc::ecmp_hash(1, 2, 3, 4), sc::ecmp_hash(1, 2, 3, 4));
  EXPECT_NE(sc::ecmp_hash(1, 2, 3, 4), sc::ecmp_hash(1, 2, 4, 4));
  const auto t = topo::build_fat_tree(4);
  const std::vector<tr::Flow> flows{flow(17, t.hosts()[0], t.hosts()[15], 10)};
  EXPECT_EQ(sc::schedule_ecmp(flows, t, 5)[0].path, sc::schedule_ecmp(flows, t, 5)[0].path);
}

TEST(SchedulerKind, Names) {
  EXPECT_EQ(sc::to_string(sc::SchedulerKind::size_kp_pso), "size-kp-pso");
  EXPECT_EQ(sc::parse_scheduler("ecmp"), sc::SchedulerKind::ecmp);
  EXPECT_FALSE(sc::parse_scheduler("hedera"));
}
