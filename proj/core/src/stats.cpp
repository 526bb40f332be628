#include "rrw/stats.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "rrw/error.hpp"

namespace rrw {

ProportionCI binomial_ci(std::int64_t successes, std::int64_t trials, double confidence) {
  if (trials < 0 || successes < 0 || successes > trials) throw Error("bad binomial counts");
  ProportionCI ci;
  if (trials == 0) return ci;
  double x = static_cast<double>(successes), n = static_cast<double>(trials);
  double alpha = 1 - confidence;
  ci.estimate = x / n;
  ci.lower = successes == 0 ? 0.0 : boost::math::quantile(boost::math::beta_distribution<>(x, n - x + 1), alpha / 2);
  ci.upper = successes == trials ? 1.0
                                 : boost::math::quantile(boost::math::beta_distribution<>(x + 1, n - x), 1 - alpha / 2);
  return ci;
}

ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& observed, const std::vector<double>& probs) {
  if (observed.size() != probs.size()) throw Error("chi-square: size mismatch");
  double n = 0;
  for (auto o : observed) n += static_cast<double>(o);
  ChiSquareResult r;
  if (n == 0) return r;
  // pool small cells into one
  double pooled_obs = 0, pooled_exp = 0;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    double e = probs[i] * n;
    double o = static_cast<double>(observed[i]);
    if (e <= 0) {
      if (o > 0) {
        r.statistic = INFINITY;
        r.dof = 1;
        r.p_value = 0;
        return r;
      }
      continue;
    }
    if (e < 5) {
      pooled_obs += o;
      pooled_exp += e;
      continue;
    }
    r.statistic += (o - e) * (o - e) / e;
    ++cells;
  }
  if (pooled_exp > 0) {
    r.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  r.dof = cells - 1;
  if (r.dof < 1) {
    r.p_value = 1;
    return r;
  }
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

double chi_square_sf(double statistic, int dof) {
  if (dof < 1) return 1;
  if (!std::isfinite(statistic)) return 0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), statistic));
}

}  // namespace rrw
