#include <gtest/gtest.h>

#include <cmath>

#include "rrw/bounds.hpp"
#include "rrw/error.hpp"
#include "rrw/oracle.hpp"

using namespace rrw;

namespace {

const WeightFunction kPow2 = WeightFunction::power(2);

}  // namespace

TEST(Qm, Examples) {
  auto a = q_m(2, 2, 1, 2, kPow2);
  ASSERT_TRUE(a.exact);
  EXPECT_EQ(a.q, Rational(25, 144));
  EXPECT_EQ(q_m(1, 3, 1, 5, kPow2).q, Rational(1, 16));
  EXPECT_EQ(q_m(2, 5, 1, 2, kPow2).q, Rational(0));
}

TEST(Qm, DynamicProgramMatchesEnumeration) {
  for (int m = 1; m <= 3; ++m)
    for (std::int64_t a = 0; a <= 10; ++a)
      for (std::int64_t c : {1, 3, 10}) {
        auto dp = q_m(m, a, 1, c, kPow2);
        auto en = q_m_enumerate(m, a, 1, c, kPow2);
        ASSERT_TRUE(dp.exact && en.exact);
        EXPECT_EQ(dp.q, en.q) << m << " " << a << " " << c;
      }
}

TEST(Qm, UncappedEqualsLargeCap) {
  EXPECT_EQ(q_m(3, 7, 1, std::nullopt, kPow2).q, q_m(3, 7, 1, 7, kPow2).q);
}

TEST(Qm, FloatFallbackForIrrationalWeights) {
  auto v = q_m(2, 4, 1, std::nullopt, WeightFunction::power(1.5));
  EXPECT_FALSE(v.exact);
  EXPECT_GT(v.x, 0);
}

TEST(CBound, Passes) {
  for (int m = 1; m <= 3; ++m) {
    auto r = c_bound_check(m, 0, 10, 1, kPow2);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.rhs_lower, r.rhs_upper);
  }
}

TEST(JointBound, TriangleEdgeExample) {
  auto g = GraphModel::parse("triangle");
  WeightAssignment wa(WeightFunction::power(1), 1);
  std::map<EdgeId, std::int64_t> counts{{EdgeId::make(VertexId{0}, VertexId{1}), 2}};
  auto b = errw_joint_bound(g, wa, counts, 2, VertexId{0});
  ASSERT_TRUE(b.exact);
  EXPECT_EQ(b.q, Rational(4, 3));
  auto paths = enumerate_paths<Rational>(g, WalkKind::edge, wa, 2);
  auto p = exact_event_probability<Rational>(paths, [](const PathAtom<Rational>& a) {
    return a.vertices.back().value == 0 && a.counts[0] == 2;
  });
  EXPECT_EQ(p, Rational(1, 3));
  EXPECT_TRUE(dominated(p, b));
}

TEST(JointBound, VertexBoundDominatesPathExample) {
  // path a-b-c from b, VRRW: P(I_2 = b, X^a = 2) = 1/2
  auto g = GraphModel::path(3).with_root(VertexId{1});
  WeightAssignment wa(WeightFunction::power(1), 1);
  auto paths = enumerate_paths<Rational>(g, WalkKind::vertex, wa, 2);
  Rational total = exact_event_probability<Rational>(paths, [](const auto&) { return true; });
  EXPECT_EQ(total, Rational(1));
  auto p = exact_event_probability<Rational>(paths, [](const PathAtom<Rational>& a) {
    return a.vertices.back().value == 1 && a.counts[0] == 1 && a.counts[1] == 1;
  });
  EXPECT_EQ(p, Rational(1, 2));
  std::map<VertexId, std::int64_t> counts{{VertexId{0}, 1}, {VertexId{1}, 1}};
  EXPECT_TRUE(dominated(p, vrrw_joint_bound(g, wa, counts, 2, VertexId{1})));
}

TEST(OrderstatBound, DominatesOracleOnTriangle) {
  auto g = GraphModel::parse("triangle");
  WeightAssignment wa(kPow2, 1);
  for (int k = 0; k <= 6; ++k) {
    auto dist = exact_orderstat_distribution(enumerate_paths<Rational>(g, WalkKind::edge, wa, k), 2);
    for (auto& [ell, p] : dist) EXPECT_TRUE(dominated(p, errw_orderstat_bound(3, 3, kPow2, 1, k, ell)));
    auto vdist = exact_orderstat_distribution(enumerate_paths<Rational>(g, WalkKind::vertex, wa, k), 3);
    for (auto& [ell, p] : vdist) EXPECT_TRUE(dominated(p, vrrw_orderstat_bound(3, kPow2, 1, k, ell)));
  }
}

TEST(OrderstatBound, ConstantsArePositive) {
  EXPECT_GT(errw_orderstat_constant(3, 3, kPow2, 1).x, 0);
  EXPECT_GT(vrrw_orderstat_constant(4, kPow2, 1).x, 0);
  EXPECT_GT(bipartite_orderstat_constant(4, kPow2, 1).x, 0);
}

TEST(OrderstatBound, BipartiteFamily) {
  auto g = GraphModel::cycle(4);
  auto w = WeightFunction::power(3);
  auto b = bipartite_orderstat_bound(g, w, 1, 100, 10);
  EXPECT_TRUE(std::isfinite(static_cast<double>(b.x)));
  EXPECT_GT(b.x, 0);
  EXPECT_GT(bipartite_bipbip_bound(g, w, 1, 100, 10).x, 0);
  EXPECT_GT(triangle_free_orderstat_bound(GraphModel::cycle(5), w, 1, 100, 10).x, 0);
}

TEST(Stuck, LatticePowerThree) {
  WeightAssignment wa(WeightFunction::power(3), 1);
  auto p = stuck_probability_p(2, wa);
  EXPECT_NEAR(static_cast<double>(p.p), 0.445647, 1e-5);
  EXPECT_GE(p.product_form, p.p);
  EXPECT_NEAR(static_cast<double>(escape_bound(10, p.p)), 0.05235, 1e-4);
}

TEST(Stuck, GeometricWeight) {
  WeightAssignment wa(WeightFunction::exponential(std::log(2.0)), 0);
  EXPECT_NEAR(static_cast<double>(stuck_probability_p(1, wa).p), std::exp(-2.0), 1e-9);
}

TEST(Stuck, Errors) {
  WeightAssignment wa(WeightFunction::power(1), 1);
  EXPECT_THROW(stuck_probability_p(2, wa), DivergenceError);
  EXPECT_THROW(escape_bound(4, 0.0), Error);
  EXPECT_DOUBLE_EQ(static_cast<double>(escape_bound(1, 0.5)), 1.0);
}

TEST(Permuted, EqualInitialWeights) {
  PermutedOptions opt;
  opt.aggregate = false;
  auto b = permuted_orderstat_bound(kPow2, {1, 1, 1}, {2, 1, 0}, opt);
  ASSERT_TRUE(b.exact);
  EXPECT_GT(b.q, 0);
  std::vector<double> l0s(10, 1.0);
  l0s[3] = 2;
  EXPECT_THROW(permuted_orderstat_bound(kPow2, l0s, std::vector<std::int64_t>(10, 0), opt), BudgetError);
}

TEST(Dominated, ConservativeForFloats) {
  auto b = BoundValue::of(0.5L);
  EXPECT_TRUE(dominated(Rational(1, 4), b));
  EXPECT_FALSE(dominated(Rational(3, 4), b));
  EXPECT_TRUE(dominated(Rational(1, 2), BoundValue::of(Rational(1, 2))));
}

TEST(BoundReport, JsonCarriesExactFractions) {
  BoundReport r;
  r.name = "qm";
  r.values.push_back({"value", BoundValue::of(Rational(25, 144))});
  auto s = to_json(r);
  EXPECT_NE(s.find("\"numerator\""), std::string::npos);
  EXPECT_NE(s.find("\"144\""), std::string::npos);
}
