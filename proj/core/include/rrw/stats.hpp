#pragma once

#include <cstdint>
#include <cmath>
#include <map>
#include <vector>

namespace rrw {

struct ProportionCI {
  double estimate = 0;
  double lower = 0;
  double upper = 1;
};

// Clopper-Pearson interval
ProportionCI binomial_ci(std::int64_t successes, std::int64_t trials, double confidence = 0.95);

struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};

// goodness of fit of observed counts against cell probabilities; cells with expected count
// below 5 are pooled
ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& observed, const std::vector<double>& probs);

// upper tail P(X >= statistic) of a chi-square law with dof degrees of freedom
double chi_square_sf(double statistic, int dof);

template <class Key>
double total_variation(const std::map<Key, std::int64_t>& a, std::int64_t na, const std::map<Key, std::int64_t>& b,
                       std::int64_t nb) {
  double s = 0;
  for (auto& [k, c] : a) {
    auto it = b.find(k);
    double q = it == b.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(nb);
    s += std::abs(static_cast<double>(c) / static_cast<double>(na) - q);
  }
  for (auto& [k, c] : b)
    if (!a.count(k)) s += static_cast<double>(c) / static_cast<double>(nb);
  return s / 2;
}

}  // namespace rrw
