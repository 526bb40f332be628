#include <gtest/gtest.h>

#include <filesystem>

#include "rrw/error.hpp"
#include "rrw/harness.hpp"

using namespace rrw;

namespace {

EnsembleConfig small(const char* graph, WalkKind kind, const char* weight) {
  EnsembleConfig c;
  c.graph = graph;
  c.kind = kind;
  c.weight = weight;
  c.replicas = 40;
  c.horizon = 2000;
  c.window = 200;
  c.seed = 17;
  return c;
}

std::vector<VertexId> seq(std::initializer_list<std::int64_t> xs) {
  std::vector<VertexId> v;
  for (auto x : xs) v.push_back(VertexId{x});
  return v;
}

}  // namespace

TEST(Detect, AlternationOnOneEdge) {
  std::vector<VertexId> t = seq({0, 2, 1});
  for (int i = 0; i < 100; ++i) t.push_back(VertexId{i % 2 == 0 ? 0 : 1});
  auto v = detect_attraction(t, WalkKind::edge, 10);
  ASSERT_TRUE(v.detected);
  EXPECT_EQ(v.attracting_set, seq({0, 1}));
  EXPECT_EQ(v.stabilization_step, 3);
}

TEST(Detect, ThreeVerticesInWindow) {
  auto t = seq({0, 1, 0, 1, 2, 1, 0, 1, 2});
  EXPECT_FALSE(detect_attraction(t, WalkKind::vertex, 5).detected);
  auto u = seq({2, 1, 0, 1, 0, 1, 0, 1, 0});
  auto v = detect_attraction(u, WalkKind::vertex, 5);
  ASSERT_TRUE(v.detected);
  EXPECT_EQ(v.stabilization_step, 1);
}

TEST(Detect, WindowLongerThanTrajectory) {
  EXPECT_THROW(detect_attraction(seq({0, 1, 0}), WalkKind::edge, 5), Error);
}

TEST(Detect, MatchesOnlineMonitor) {
  auto g = std::make_shared<const GraphModel>(GraphModel::cycle(4));
  for (auto kind : {WalkKind::edge, WalkKind::vertex})
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      WalkState s(g, kind, WeightAssignment(WeightFunction::power(1.3), 1), seed);
      std::vector<VertexId> t{s.current()};
      for (int i = 0; i < 500; ++i) {
        s.step();
        t.push_back(s.current());
      }
      auto a = s.attraction(50), b = detect_attraction(t, kind, 50);
      EXPECT_EQ(a.detected, b.detected);
      EXPECT_EQ(a.stabilization_step, b.stabilization_step);
    }
}

TEST(Ensemble, EmptyEnsemble) {
  auto c = small("triangle", WalkKind::edge, "power:2");
  c.replicas = 0;
  auto e = run_ensemble(c);
  EXPECT_TRUE(e.runs.empty());
  EXPECT_EQ(e.detected, 0);
  EXPECT_TRUE(attraction_time_histogram(e).bins.empty());
}

TEST(Ensemble, DefaultWindow) {
  EnsembleConfig c;
  c.horizon = 100000;
  EXPECT_EQ(effective_window(c), 10000);
  c.horizon = 1000000;
  EXPECT_EQ(effective_window(c), 100000);
  c.horizon = 500;
  EXPECT_EQ(effective_window(c), 500);
}

TEST(Ensemble, WorkerCountDoesNotChangeResults) {
  auto c = small("cycle:5", WalkKind::vertex, "power:3");
  auto a = run_ensemble(c);
  c.workers = 3;
  auto b = run_ensemble(c);
  EXPECT_EQ(replicas_csv(a), replicas_csv(b));
  EXPECT_EQ(a.orderstat_table, b.orderstat_table);
}

TEST(Ensemble, ReproducibleJson) {
  auto c = small("path:5", WalkKind::edge, "power:2");
  EXPECT_EQ(to_json(run_ensemble(c)), to_json(run_ensemble(c)));
}

TEST(Ensemble, FailedReplicasAreRecorded) {
  auto c = small("triangle", WalkKind::edge, "exp:800");
  c.replicas = 3;
  c.horizon = 50;
  c.window = 10;
  auto e = run_ensemble(c);
  EXPECT_EQ(static_cast<std::int64_t>(e.runs.size()), 3);
  EXPECT_EQ(e.failed + e.completed(), 3);
}

TEST(Ensemble, HistogramCountsDetected) {
  auto e = run_ensemble(small("triangle", WalkKind::edge, "power:2"));
  auto h = attraction_time_histogram(e);
  std::int64_t s = 0;
  for (auto& b : h.bins) s += b.count;
  EXPECT_EQ(s, e.detected);
  EXPECT_EQ(h.detected, e.detected);
  EXPECT_FALSE(h.caveat.empty());
}

TEST(Orderstat, TriangleEmpiricalBelowBound) {
  auto c = small("triangle", WalkKind::edge, "power:2");
  c.horizon = 50;
  c.window = 10;
  c.replicas = 100000;
  auto e = run_ensemble(c);
  auto table = orderstat_bound_table(c);
  auto cmp = compare_orderstat_bound(e, table);
  EXPECT_FALSE(cmp.violation);
  for (auto& row : cmp.rows)
    if (row.ell == 1) EXPECT_LE(row.frequency, static_cast<double>(row.bound.x));
}

TEST(Orderstat, CorruptedBoundIsFlagged) {
  auto c = small("triangle", WalkKind::edge, "power:2");
  c.horizon = 20;
  c.window = 5;
  c.replicas = 2000;
  auto e = run_ensemble(c);
  auto table = orderstat_bound_table(c);
  for (auto& [ell, b] : table.values) b = BoundValue::of(b.x * 1e-6L);
  EXPECT_TRUE(compare_orderstat_bound(e, table).violation);
  table.weight = "power:3";
  EXPECT_THROW(compare_orderstat_bound(e, table), Error);
}

TEST(Escape, LatticeSmallRun) {
  EnsembleConfig c;
  c.graph = "lattice:1";
  c.weight = "power:3";
  c.replicas = 500;
  c.horizon = 2000;
  c.window = 100;
  c.seed = 3;
  auto e = run_ensemble(c);
  auto rep = escape_statistics(e, {1, 2, 4, 6});
  EXPECT_TRUE(rep.consistent);
  EXPECT_TRUE(rep.monotone);
  EXPECT_NEAR(static_cast<double>(rep.rows[0].bound), 1.0, 0);
}

TEST(Artifacts, WritesFiles) {
  auto dir = std::filesystem::temp_directory_path() / "rrw_harness_test";
  std::filesystem::remove_all(dir);
  auto c = small("triangle", WalkKind::edge, "power:2");
  c.replicas = 4;
  c.resolved_config = "[walk]\nweight = \"power:2\"\n";
  auto e = run_ensemble(c);
  auto files = write_artifacts(e, dir.string(), "json");
  ASSERT_EQ(files.size(), 2u);
  for (auto& f : files) EXPECT_TRUE(std::filesystem::exists(f));
  auto json = to_json(e);
  EXPECT_NE(json.find("\"schema_version\""), std::string::npos);
  EXPECT_NE(json.find("\"resolved_config\""), std::string::npos);
  std::filesystem::remove_all(dir);
}
