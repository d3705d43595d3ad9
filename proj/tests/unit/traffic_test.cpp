#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "kpflow/errors.hpp"
#include "kpflow/topology.hpp"
#include "kpflow/traffic.hpp"

namespace tr = kpflow::traffic;
namespace topo = kpflow::topo;

namespace {

tr::WorkloadSpec spec_with(tr::TrafficPattern p, std::int64_t n = 300, std::uint64_t seed = 1) {
  tr::WorkloadSpec s;
  s.num_flows = n;
  s.pattern = p;
  s.rng_seed = seed;
  return s;
}

}  // namespace

TEST(Classify, Boundaries) {
  EXPECT_EQ(tr::classify(1), tr::FlowClass::mice);
  EXPECT_EQ(tr::classify(100), tr::FlowClass::mice);
  EXPECT_EQ(tr::classify(101), tr::FlowClass::elephant);
  EXPECT_EQ(tr::classify(200000), tr::FlowClass::elephant);
  EXPECT_EQ(tr::to_string(tr::FlowClass::mice), "MF");
  EXPECT_EQ(tr::to_string(tr::FlowClass::elephant), "EF");
}

TEST(Pattern, ParseAndPrint) {
  EXPECT_EQ(tr::parse_pattern("stag:0.3:0.3"), tr::TrafficPattern(tr::Stag{0.3, 0.3}));
  EXPECT_EQ(tr::parse_pattern("random"), tr::TrafficPattern(tr::RandomPattern{}));
  EXPECT_EQ(tr::parse_pattern("stride:4"), tr::TrafficPattern(tr::Stride{4}));
  for (const char* s : {"stag:0.5:0.3", "random", "stride:1"}) {
    EXPECT_EQ(tr::to_string(tr::parse_pattern(s)), s);
  }
  EXPECT_EQ(tr::slug(tr::Stag{0.3, 0.3}), "stag-0.3-0.3");
  EXPECT_THROW(tr::parse_pattern("stag:0.8:0.5"), kpflow::InvalidWorkload);
  EXPECT_THROW(tr::parse_pattern("stride:x"), kpflow::InvalidWorkload);
  EXPECT_THROW(tr::parse_pattern("zipf"), kpflow::InvalidWorkload);
}

TEST(Generate, NineToOneSplit) {
  const auto t = topo::build_fat_tree(4);
  const auto flows = tr::generate(spec_with(tr::Stag{0.3, 0.3}), t);
  ASSERT_EQ(flows.size(), 300u);
  int mice = 0;
  for (const auto& f : flows) {
    mice += tr::classify(f) == tr::FlowClass::mice;
    EXPECT_NE(f.src_host, f.dst_host);
    EXPECT_TRUE(t.is_host(f.src_host));
    EXPECT_TRUE(t.is_host(f.dst_host));
    EXPECT_GE(f.size_kb, 1);
    EXPECT_LE(f.size_kb, 200000);
    EXPECT_EQ(f.start_time_s, 0.0);
  }
  EXPECT_EQ(mice, 270);
}

TEST(Generate, Deterministic) {
  const auto t = topo::build_fat_tree(4);
  const auto a = tr::generate(spec_with(tr::RandomPattern{}, 500, 9), t);
  const auto b = tr::generate(spec_with(tr::RandomPattern{}, 500, 9), t);
  std::ostringstream sa, sb;
  tr::write_workload_csv(sa, a);
  tr::write_workload_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  const auto c = tr::generate(spec_with(tr::RandomPattern{}, 500, 10), t);
  std::ostringstream sc;
  tr::write_workload_csv(sc, c);
  EXPECT_NE(sa.str(), sc.str());
}

TEST(Generate, SizesIndependentOfPattern) {
  const auto t = topo::build_fat_tree(4);
  const auto a = tr::generate(spec_with(tr::RandomPattern{}), t);
  const auto b = tr::generate(spec_with(tr::Stride{4}), t);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].size_kb, b[i].size_kb);
}

TEST(Generate, MiceSizeMean) {
  const auto t = topo::build_fat_tree(4);
  const auto flows = tr::generate(spec_with(tr::RandomPattern{}, 10000, 3), t);
  double sum = 0.0;
  int n = 0;
  for (const auto& f : flows) {
    if (tr::classify(f) == tr::FlowClass::mice) {
      sum += static_cast<double>(f.size_kb);
      ++n;
    }
  }
  EXPECT_EQ(n, 9000);
  EXPECT_GE(sum / n, 48.0);
  EXPECT_LE(sum / n, 53.0);
}

TEST(Generate, StagPeerFrequencies) {
  const auto t = topo::build_fat_tree(4);
  const int n = 20000;
  const auto flows = tr::generate(spec_with(tr::Stag{0.5, 0.3}, n, 4), t);
  int edge = 0, pod = 0;
  for (const auto& f : flows) {
    if (t.edge_switch_of(f.src_host) == t.edge_switch_of(f.dst_host)) {
      ++edge;
    } else if (t.node(f.src_host).pod == t.node(f.dst_host).pod) {
      ++pod;
    }
  }
  auto within_3_sigma = [n](int count, double p) {
    const double sigma = std::sqrt(n * p * (1 - p));
    return std::abs(count - n * p) <= 3 * sigma;
  };
  EXPECT_TRUE(within_3_sigma(edge, 0.5)) << edge;
  EXPECT_TRUE(within_3_sigma(pod, 0.3)) << pod;
}

TEST(Generate, StrideMapsHostIToIPlusOffset) {
  const auto t = topo::build_fat_tree(4);
  const auto flows = tr::generate(spec_with(tr::Stride{4}, 64), t);
  for (std::size_t i = 0; i < flows.size(); ++i) {
    EXPECT_EQ(t.host_index(flows[i].src_host), i % 16);
    EXPECT_EQ(t.host_index(flows[i].dst_host), (i % 16 + 4) % 16);
  }
}

TEST(Generate, InfeasiblePatterns) {
  const auto t4 = topo::build_fat_tree(4);
  EXPECT_THROW(tr::generate(spec_with(tr::Stride{0}), t4), kpflow::PatternInfeasible);
  EXPECT_THROW(tr::generate(spec_with(tr::Stride{16}), t4), kpflow::PatternInfeasible);
  const auto t2 = topo::build_fat_tree(2);  // one host per edge switch
  EXPECT_THROW(tr::generate(spec_with(tr::Stag{0.3, 0.3}), t2), kpflow::PatternInfeasible);
}

TEST(Generate, ArrivalWindow) {
  const auto t = topo::build_fat_tree(4);
  auto s = spec_with(tr::RandomPattern{});
  s.arrival_window_s = 0.5;
  for (const auto& f : tr::generate(s, t)) {
    EXPECT_GE(f.start_time_s, 0.0);
    EXPECT_LT(f.start_time_s, 0.5);
  }
}

TEST(Generate, SpecValidation) {
  auto s = spec_with(tr::RandomPattern{});
  s.mf_fraction = 1.5;
  EXPECT_THROW(s.validate(), kpflow::InvalidWorkload);
  s = spec_with(tr::RandomPattern{});
  s.num_flows = -1;
  EXPECT_THROW(s.validate(), kpflow::InvalidWorkload);
}

TEST(WorkloadCsv, RoundTrip) {
  const auto t = topo::build_fat_tree(4);
  const auto flows = tr::generate(spec_with(tr::Stag{0.3, 0.3}), t);
  std::stringstream ss;
  tr::write_workload_csv(ss, flows);
  const auto back = tr::read_workload_csv(ss);
  ASSERT_EQ(back.size(), flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i) {
    EXPECT_EQ(back[i].id, flows[i].id);
    EXPECT_EQ(back[i].src_host, flows[i].src_host);
    EXPECT_EQ(back[i].dst_host, flows[i].dst_host);
    EXPECT_EQ(back[i].size_kb, flows[i].size_kb);
  }
}

TEST(WorkloadCsv, RejectsBadInput) {
  std::istringstream bad_header("a,b,c\n");
  EXPECT_THROW(tr::read_workload_csv(bad_header), kpflow::InvalidWorkload);
  std::istringstream bad_size("id,src,dst,size_kb\n0,0,1,0\n");
  EXPECT_THROW(tr::read_workload_csv(bad_size), kpflow::InvalidWorkload);
}
