#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rrw/error.hpp"
#include "rrw/rubin.hpp"
#include "rrw/series.hpp"
#include "rrw/stats.hpp"
#include "rrw/walk.hpp"

using namespace rrw;

namespace {

double embedded_frequency(WalkState base, std::int64_t target, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int hit = 0;
  for (int i = 0; i < n; ++i) {
    WalkState s = base;
    s.rng().seed(rng());
    embedded_step(s);
    if (s.current().value == target) ++hit;
  }
  return static_cast<double>(hit) / n;
}

WalkState abc_state(WalkKind kind) {
  auto g = std::make_shared<const GraphModel>(GraphModel::path(3).with_root(VertexId{1}));
  return WalkState(g, kind, WeightAssignment(WeightFunction::power(2), 1), 0);
}

}  // namespace

TEST(Rubin, EqualRatesSplitEvenly) {
  const int n = 100000;
  double f = embedded_frequency(abc_state(WalkKind::edge), 0, n, 1);
  EXPECT_NEAR(f, 0.5, 3 * std::sqrt(0.25 / n));
}

TEST(Rubin, RatesNineToOne) {
  auto s = abc_state(WalkKind::edge);
  s.move_to_neighbor(0);
  s.move_to_neighbor(0);
  const int n = 100000;
  double f = embedded_frequency(s, 0, n, 2);
  EXPECT_NEAR(f, 0.9, 3 * std::sqrt(0.09 / n));
}

TEST(Rubin, ChiSquareAgainstTransitionLaw) {
  auto g = std::make_shared<const GraphModel>(GraphModel::complete(4));
  WalkState base(g, WalkKind::vertex, WeightAssignment(WeightFunction::power(2), 1), 5);
  base.run(7);
  auto d = base.transition_distribution();
  std::vector<double> probs;
  for (auto& t : d.entries) probs.push_back(t.probability);
  std::vector<std::int64_t> obs(probs.size(), 0);
  auto nb = base.current_neighbors();
  std::mt19937_64 rng(77);
  for (int i = 0; i < 100000; ++i) {
    WalkState s = base;
    s.rng().seed(rng());
    embedded_step(s);
    for (std::size_t j = 0; j < nb.size(); ++j)
      if (nb[j] == s.current()) ++obs[j];
  }
  auto r = chi_square_gof(obs, probs);
  EXPECT_GT(r.p_value, 1e-3);
}

TEST(Rubin, ClockStreamIncreases) {
  ClockStream c(WeightFunction::power(2), 1);
  std::mt19937_64 rng(3);
  long double prev = 0;
  for (int i = 0; i < 100; ++i) {
    long double t = c.next(rng);
    EXPECT_GT(t, prev);
    prev = t;
  }
  EXPECT_EQ(c.index(), 100);
}

TEST(Rubin, UnitExponentialMean) {
  std::mt19937_64 rng(4);
  double s = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) s += unit_exponential(rng);
  EXPECT_NEAR(s / n, 1.0, 0.01);
}

TEST(Rubin, SymmetricStarTwo) {
  auto est = star_stuck_probability(GraphModel::star(2), WeightFunction::power(2), 1, 10000, 8);
  ASSERT_EQ(est.attractor_counts.size(), 2u);
  double f = static_cast<double>(est.attractor_counts[0]) / static_cast<double>(est.replicas);
  EXPECT_NEAR(f, 0.5, 3 * std::sqrt(0.25 / 10000.0));
}

TEST(Rubin, StarThreeAlwaysAttracts) {
  auto est = star_stuck_probability(GraphModel::star(3), WeightFunction::power(2), 1, 2000, 9);
  // unresolved replicas stay in the denominator
  EXPECT_LE(est.ambiguous, 2);
  EXPECT_GE(est.attractor_exists.estimate, 0.999);
  EXPECT_GE(est.attractor_exists.upper, 0.9999);
}

TEST(Rubin, StarMeanClockTime) {
  // clocks of a leaf edge ring at rates w(1 + 2j): sum_j 1/(2j+1)^2 = pi^2/8
  auto est = star_stuck_probability(GraphModel::star(3), WeightFunction::power(2), 1, 5000, 10);
  EXPECT_NEAR(est.mean_total_time, std::numbers::pi * std::numbers::pi / 8, 0.03);
}

TEST(Rubin, NonSummableWeightRejected) {
  EXPECT_THROW(star_stuck_probability(GraphModel::star(2), WeightFunction::power(1), 1, 10, 1), DivergenceError);
}
