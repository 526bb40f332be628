#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rrw/error.hpp"
#include "rrw/series.hpp"

using namespace rrw;

namespace {

constexpr double kZeta3 = 1.2020569031595942854;

// brute force partial sum plus the integral of the monotone tail
double reference_half(double b) {
  long double s = 0;
  const long N = 4'000'000;
  for (long i = 1; i <= N; ++i) s += std::sqrt(static_cast<long double>(i)) / ((i + b) * (i + b));
  // tail of x^(1/2)/(x+b)^2 ~ x^(-3/2)
  s += 2.0L / std::sqrt(static_cast<long double>(N) + 0.5L);
  return static_cast<double>(s);
}

}  // namespace

TEST(Series, ZetaTwo) {
  auto s = tail_sum_c(WeightFunction::power(2), 1, 1e-9);
  EXPECT_NEAR(static_cast<double>(s.value), std::numbers::pi * std::numbers::pi / 6, 1e-9);
  EXPECT_LE(s.lower, s.upper);
  EXPECT_LE(s.remainder, 1e-9);
}

TEST(Series, Geometric) {
  auto s = tail_sum_c(WeightFunction::exponential(std::log(2.0)), 0, 1e-9);
  EXPECT_NEAR(static_cast<double>(s.value), 2.0, 1e-9);
}

TEST(Series, ZetaThree) {
  auto s = tail_sum_c(WeightFunction::power(3), 1, 1e-9);
  EXPECT_NEAR(static_cast<double>(s.value), kZeta3, 1e-9);
}

TEST(Series, WeightedTailAlphaOne) {
  auto s = weighted_tail_sum(WeightFunction::power(3), 1, 1, 1e-6);
  EXPECT_NEAR(static_cast<double>(s.value), std::numbers::pi * std::numbers::pi / 6 - kZeta3, 1e-6);
}

TEST(Series, WeightedTailDiverges) {
  EXPECT_THROW(weighted_tail_sum(WeightFunction::power(2), 1, 0, 1e-6), DivergenceError);
  EXPECT_THROW(tail_sum_c(WeightFunction::power(1), 1, 1e-6), DivergenceError);
}

TEST(Series, WeightedTailAlphaHalf) {
  auto s = weighted_tail_sum(WeightFunction::power(2), 0.5, 1, 1e-6);
  EXPECT_LE(s.remainder, 1e-6);
  EXPECT_NEAR(static_cast<double>(s.value), reference_half(1), 2e-6);
}

TEST(Series, TailDecreasesInShift) {
  auto w = WeightFunction::power(2.5);
  double prev = INFINITY;
  for (double b : {1.0, 2.0, 5.0}) {
    auto s = tail_sum_c(w, b, 1e-9);
    EXPECT_LT(static_cast<double>(s.value), prev);
    prev = static_cast<double>(s.value);
  }
}

TEST(Series, BracketContainsTruth) {
  // sum_{i>=0} 1/(i+1)^2 with a deliberately small term budget
  auto s = series_sum(WeightFunction::power(2), 0, 1, 0, 1e-30, 1 << 10);
  double truth = std::numbers::pi * std::numbers::pi / 6;
  EXPECT_LE(static_cast<double>(s.lower), truth);
  EXPECT_GE(static_cast<double>(s.upper), truth);
  EXPECT_GT(s.remainder, 0);
}

TEST(Series, PowerLogBracket) {
  auto w = WeightFunction::power_log(1.5, 2);
  auto s = series_sum(w, 0.5, 1, 1, 1e-4, 1 << 20);
  EXPECT_TRUE(std::isfinite(static_cast<double>(s.upper)));
  EXPECT_LE(s.lower, s.upper);
}
