#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "rrw/error.hpp"
#include "rrw/graph.hpp"
#include "rrw/stats.hpp"
#include "rrw/walk.hpp"

using namespace rrw;

namespace {

WalkState make(const GraphModel& g, WalkKind kind, const char* w, double l0, std::uint64_t seed = 1) {
  return WalkState(std::make_shared<const GraphModel>(g), kind, WeightAssignment(WeightFunction::parse(w), l0), seed);
}

// path a-b-c with the walk started at b
GraphModel abc() { return GraphModel::path(3).with_root(VertexId{1}); }

double prob_to(const TransitionDistribution& d, std::int64_t v) {
  for (auto& t : d.entries)
    if (t.to.value == v) return t.probability;
  return -1;
}

struct Checker : Observer {
  std::vector<std::int64_t> prev;
  bool monotone = true;
  bool conserved = true;
  void observe(const WalkState& s) override {
    auto r = s.order_statistics();
    if (s.total_count() != s.step_index()) conserved = false;
    for (std::size_t i = 0; i < std::min(r.size(), prev.size()); ++i)
      if (r[i] < prev[i]) monotone = false;
    prev = r;
  }
};

}  // namespace

TEST(Walk, InitialTransitionIsSymmetric) {
  auto s = make(abc(), WalkKind::edge, "power:2", 1);
  auto d = s.transition_distribution();
  EXPECT_DOUBLE_EQ(prob_to(d, 0), 0.5);
  EXPECT_DOUBLE_EQ(prob_to(d, 2), 0.5);
}

TEST(Walk, ErrwAfterReturn) {
  auto s = make(abc(), WalkKind::edge, "power:2", 1);
  s.move_to_neighbor(0);  // b -> a
  s.move_to_neighbor(0);  // a -> b
  ASSERT_EQ(s.current().value, 1);
  EXPECT_EQ(s.count(EdgeId::make(VertexId{0}, VertexId{1})), 2);
  auto d = s.transition_distribution();
  EXPECT_NEAR(prob_to(d, 0), 0.9, 1e-15);
  EXPECT_NEAR(prob_to(d, 2), 0.1, 1e-15);
}

TEST(Walk, VrrwAfterReturn) {
  auto s = make(abc(), WalkKind::vertex, "power:2", 1);
  s.move_to_neighbor(0);
  s.move_to_neighbor(0);
  // the start vertex is not credited, b is credited on the return
  EXPECT_EQ(s.count(VertexId{0}), 1);
  EXPECT_EQ(s.count(VertexId{1}), 1);
  EXPECT_EQ(s.count(VertexId{2}), 0);
  auto d = s.transition_distribution();
  EXPECT_NEAR(prob_to(d, 0), 0.8, 1e-15);
  EXPECT_NEAR(prob_to(d, 2), 0.2, 1e-15);
}

TEST(Walk, StepIncrementsTheRightElement) {
  auto e = make(GraphModel::cycle(5), WalkKind::edge, "power:2", 1, 3);
  for (int i = 0; i < 50; ++i) {
    auto from = e.current();
    e.step();
    auto to = e.current();
    EXPECT_GE(e.count(EdgeId::make(from, to)), 1);
    EXPECT_EQ(e.total_count(), e.step_index());
  }
  auto v = make(GraphModel::cycle(5), WalkKind::vertex, "power:2", 1, 3);
  for (int i = 0; i < 50; ++i) {
    auto from = v.current();
    auto before_from = v.count(from);
    v.step();
    EXPECT_EQ(v.count(from), before_from);
    EXPECT_EQ(v.total_count(), v.step_index());
  }
}

TEST(Walk, RunZeroIsInitialState) {
  auto s = make(GraphModel::star(3), WalkKind::edge, "power:2", 1);
  auto sum = s.run(0);
  EXPECT_TRUE(sum.final_counts.empty());
  EXPECT_EQ(sum.horizon, 0);
}

TEST(Walk, RunConservesCounts) {
  auto s = make(GraphModel::star(3), WalkKind::edge, "power:2", 1);
  auto sum = s.run(10);
  std::int64_t tot = 0;
  for (auto& c : sum.final_counts) tot += c.count;
  EXPECT_EQ(tot, 10);
}

TEST(Walk, DeterministicReplay) {
  auto a = make(GraphModel::path(5), WalkKind::edge, "power:2", 1, 42);
  auto b = make(GraphModel::path(5), WalkKind::edge, "power:2", 1, 42);
  auto g = GraphModel::path(5);
  EXPECT_EQ(to_json(a.run(1000), g), to_json(b.run(1000), g));
}

TEST(Walk, OrderStatistics) {
  auto s = make(GraphModel::parse("triangle"), WalkKind::edge, "power:2", 1);
  auto r = s.order_statistics();
  EXPECT_TRUE(std::all_of(r.begin(), r.end(), [](auto x) { return x == 0; }));
  s.move_to_neighbor(0);
  s.move_to_neighbor(0);
  s.move_to_neighbor(1);
  r = s.order_statistics();
  ASSERT_GE(r.size(), 2u);
  EXPECT_TRUE(std::is_sorted(r.begin(), r.end(), std::greater<>()));
  EXPECT_EQ(s.order_statistic(1), r[0]);
}

TEST(Walk, VrrwCycleOrderStatisticInequalities) {
  auto s = make(GraphModel::cycle(4), WalkKind::vertex, "power:2", 1, 9);
  s.run(100);
  const std::int64_t k = 100, n = 4;
  auto r1 = s.order_statistic(1), r2 = s.order_statistic(2);
  EXPECT_LE(k / n, r1);
  EXPECT_LE(r1, (k + 1) / 2);
  EXPECT_LE((k - 1) / (2 * (n - 1)), r2);
  EXPECT_LE(r2, k / 2);
}

TEST(Walk, MonotoneAndConservedAlongTrajectory) {
  for (auto kind : {WalkKind::edge, WalkKind::vertex}) {
    auto s = make(GraphModel::complete(4), kind, "power:1.5", 1, 5);
    Checker c;
    RunOptions opt;
    opt.stride = RunOptions::Stride::every;
    s.run(2000, opt, {&c});
    EXPECT_TRUE(c.monotone);
    EXPECT_TRUE(c.conserved);
  }
}

TEST(Walk, BipartiteDecoupling) {
  auto g = GraphModel::cycle(6);
  auto bp = is_bipartite(g);
  auto s = make(g, WalkKind::vertex, "power:1.2", 1, 11);
  for (int i = 0; i < 3000; ++i) {
    s.step();
    std::int64_t d = 0;
    for (auto v : bp.side1) d += s.count(v);
    for (auto v : bp.side2) d -= s.count(v);
    ASSERT_LE(std::abs(d), 2);
  }
}

TEST(Walk, ScaleInvariance) {
  auto g = std::make_shared<const GraphModel>(GraphModel::cycle(5));
  WeightAssignment w1(WeightFunction::power(2), 1);
  WeightAssignment w7(WeightFunction::power(2).scaled(Rational(7)), 1);
  WalkState a(g, WalkKind::edge, w1, 1), b(g, WalkKind::edge, w7, 1);
  for (int i = 0; i < 30; ++i) {
    auto da = a.transition_distribution(), db = b.transition_distribution();
    ASSERT_EQ(da.entries.size(), db.entries.size());
    for (std::size_t j = 0; j < da.entries.size(); ++j)
      EXPECT_NEAR(da.entries[j].probability, db.entries[j].probability, 1e-15);
    a.step();
    b.step();
    ASSERT_EQ(a.current(), b.current());
  }
}

TEST(Walk, OneStepFrequenciesWithinThreeSigma) {
  auto base = make(abc(), WalkKind::edge, "power:2", 1, 0);
  base.move_to_neighbor(0);
  base.move_to_neighbor(0);
  const int n = 100000;
  int to_a = 0;
  std::mt19937_64 rng(123);
  for (int i = 0; i < n; ++i) {
    WalkState s = base;
    s.rng().seed(rng());
    s.step();
    if (s.current().value == 0) ++to_a;
  }
  double sigma = std::sqrt(0.9 * 0.1 / n);
  EXPECT_NEAR(static_cast<double>(to_a) / n, 0.9, 3 * sigma);
}

TEST(Walk, LogSpaceForHugeWeights) {
  auto s = make(GraphModel::cycle(3), WalkKind::edge, "exp:50", 1, 2);
  s.run(200);
  auto d = s.transition_distribution();
  double tot = 0;
  for (auto& t : d.entries) tot += t.probability;
  EXPECT_NEAR(tot, 1.0, 1e-12);
  EXPECT_TRUE(d.log_space);
}

TEST(Walk, InfiniteLatticeRadius) {
  auto s = make(GraphModel::lattice(2), WalkKind::edge, "power:2", 1, 4);
  auto sum = s.run(5000);
  EXPECT_GE(sum.range_radius_max, 1);
  EXPECT_LE(sum.range_radius_max, 5001);
}

TEST(Walk, AttractionVerdict) {
  auto s = make(GraphModel::parse("triangle"), WalkKind::edge, "exp:1", 1, 6);
  RunOptions opt;
  opt.window = 100;
  auto sum = s.run(2000, opt);
  ASSERT_TRUE(sum.attraction.has_value());
  EXPECT_TRUE(sum.attraction->detected);
  EXPECT_EQ(sum.attraction->attracting_set.size(), 2u);
  EXPECT_THROW(s.attraction(100000), Error);
}
