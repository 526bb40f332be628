#include <gtest/gtest.h>

#include <cmath>

#include "rrw/error.hpp"
#include "rrw/oracle.hpp"
#include "rrw/stats.hpp"
#include "rrw/walk.hpp"

using namespace rrw;

TEST(Oracle, TriangleOneStep) {
  auto g = GraphModel::parse("triangle");
  WeightAssignment wa(WeightFunction::power(1), 1);
  auto paths = enumerate_paths<Rational>(g, WalkKind::edge, wa, 1);
  ASSERT_EQ(paths.size(), 2u);
  for (auto& p : paths) EXPECT_EQ(p.prob, Rational(1, 2));
}

TEST(Oracle, TriangleReturnPath) {
  auto g = GraphModel::parse("triangle");
  WeightAssignment wa(WeightFunction::power(1), 1);
  auto paths = enumerate_paths<Rational>(g, WalkKind::edge, wa, 2);
  Rational p = 0;
  for (auto& a : paths)
    if (a.vertices == std::vector<VertexId>{{0}, {1}, {0}}) p = a.prob;
  EXPECT_EQ(p, Rational(1, 3));
}

TEST(Oracle, Normalisation) {
  for (const char* gs : {"triangle", "complete:4", "star:4", "cycle:4"})
    for (auto kind : {WalkKind::edge, WalkKind::vertex}) {
      auto g = GraphModel::parse(gs);
      WeightAssignment wa(WeightFunction::osc_power(1), 1);
      auto paths = enumerate_paths<Rational>(g, kind, wa, 5);
      EXPECT_EQ(exact_event_probability<Rational>(paths, [](const auto&) { return true; }), Rational(1)) << gs;
      auto f = enumerate_paths<long double>(g, kind, WeightAssignment(WeightFunction::power(1.5), 1), 5);
      long double s = exact_event_probability<long double>(f, [](const auto&) { return true; });
      EXPECT_NEAR(static_cast<double>(s), 1.0, 1e-12);
    }
}

TEST(Oracle, ImpossibleCountsHaveProbabilityZero) {
  auto g = GraphModel::parse("triangle");
  auto paths = enumerate_paths<Rational>(g, WalkKind::edge, WeightAssignment(WeightFunction::power(2), 1), 3);
  auto p = exact_event_probability<Rational>(paths, [](const PathAtom<Rational>& a) {
    std::int64_t s = 0;
    for (auto c : a.counts) s += c;
    return s != 3;
  });
  EXPECT_EQ(p, Rational(0));
}

TEST(Oracle, OrderstatDistribution) {
  auto g = GraphModel::parse("triangle");
  WeightAssignment wa(WeightFunction::power(2), 1);
  auto d0 = exact_orderstat_distribution(enumerate_paths<Rational>(g, WalkKind::edge, wa, 0), 1);
  ASSERT_EQ(d0.size(), 1u);
  EXPECT_EQ(d0.at(0), Rational(1));
  auto paths = enumerate_paths<Rational>(g, WalkKind::edge, wa, 2);
  auto d = exact_orderstat_distribution(paths, 1);
  Rational twice = exact_event_probability<Rational>(paths, [](const PathAtom<Rational>& a) {
    for (auto c : a.counts)
      if (c == 2) return true;
    return false;
  });
  EXPECT_EQ(d.at(2), twice);
  Rational tot = 0;
  for (auto& [v, p] : d) tot += p;
  EXPECT_EQ(tot, Rational(1));
}

TEST(Oracle, BudgetEnforced) {
  auto g = GraphModel::complete(4);
  EXPECT_NO_THROW(path_budget(g, 11));
  EXPECT_THROW(path_budget(g, 20), BudgetError);
  EXPECT_THROW(path_budget(GraphModel::lattice(1), 2), Error);
}

TEST(Oracle, OneStepMarginalsMatchEngine) {
  auto g = std::make_shared<const GraphModel>(GraphModel::complete(4));
  WeightAssignment wa(WeightFunction::power(2), 1);
  for (auto kind : {WalkKind::edge, WalkKind::vertex}) {
    auto paths = enumerate_paths<Rational>(*g, kind, wa, 4);
    // replay each path in the engine and compare the product of transition probabilities
    for (std::size_t i = 0; i < paths.size(); i += 7) {
      WalkState s(g, kind, wa, 0);
      long double prob = 1;
      for (std::size_t j = 1; j < paths[i].vertices.size(); ++j) {
        auto d = s.transition_distribution();
        auto nb = s.current_neighbors();
        for (std::size_t t = 0; t < nb.size(); ++t)
          if (nb[t] == paths[i].vertices[j]) {
            prob *= d.entries[t].probability;
            s.move_to_neighbor(t);
            break;
          }
      }
      EXPECT_NEAR(static_cast<double>(prob), paths[i].prob.get_d(), 1e-14);
    }
  }
}

TEST(Oracle, EngineOrderstatLawWithinThreeSigma) {
  auto g = std::make_shared<const GraphModel>(GraphModel::parse("triangle"));
  WeightAssignment wa(WeightFunction::power(2), 1);
  const int k = 6, n = 100000;
  auto dist = exact_orderstat_distribution(enumerate_paths<Rational>(*g, WalkKind::edge, wa, k), 1);
  std::map<std::int64_t, std::int64_t> obs;
  for (int i = 0; i < n; ++i) {
    WalkState s(g, WalkKind::edge, wa, 1000 + static_cast<std::uint64_t>(i));
    for (int j = 0; j < k; ++j) s.step();
    ++obs[s.order_statistic(1)];
  }
  for (auto& [v, p] : dist) {
    double q = p.get_d();
    double sigma = std::sqrt(q * (1 - q) / n);
    EXPECT_NEAR(static_cast<double>(obs[v]) / n, q, 3 * sigma + 1e-9) << v;
  }
}
