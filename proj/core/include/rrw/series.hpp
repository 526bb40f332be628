#pragma once

#include <cstdint>

#include "rrw/weight.hpp"

namespace rrw {

struct Interval {
  long double lo = 0;
  long double hi = 0;
  long double mid() const { return (lo + hi) / 2; }
  long double radius() const { return (hi - lo) / 2; }
};

// A truncated infinite sum with an analytic remainder: the true value lies in [lower, upper].
struct CertifiedSum {
  long double value = 0;
  long double remainder = 0;  // half width of [lower, upper]
  long double lower = 0;
  long double upper = 0;
  std::int64_t terms = 0;
};

// sum_{i >= start} i^alpha / w(i + b), alpha in {0, 1/2, 1}. Doubles the number of explicit
// terms until the certified half width is below eps or max_terms is reached.
CertifiedSum series_sum(const WeightFunction& w, double alpha, double b, std::int64_t start, double eps,
                        std::int64_t max_terms = std::int64_t{1} << 24);

// c(b) = sum_{l >= 0} 1/w(l + b); throws unless the half width reaches eps
CertifiedSum tail_sum_c(const WeightFunction& w, double b, double eps);

// sum_{i >= 1} i^alpha / w(i + b); throws unless the half width reaches eps
CertifiedSum weighted_tail_sum(const WeightFunction& w, double alpha, double b, double eps);

}  // namespace rrw

namespace rrw {

// analytic bracket for sum_{i >= n} i^alpha / w(i + b); n must lie beyond any table prefix
Interval tail_interval(const WeightFunction& w, double alpha, double b, std::int64_t n);

}  // namespace rrw
