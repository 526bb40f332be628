#include "rrw/series.hpp"

#include <cfloat>
#include <cmath>
#include <limits>

#include "rrw/error.hpp"

namespace rrw {

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();

// integral of (x + s)^-q over [a, b), b may be infinite
long double power_integral(long double q, long double s, long double a, long double b) {
  if (q == 1) {
    if (b == kInf) return kInf;
    return std::log((b + s) / (a + s));
  }
  long double fa = std::pow(a + s, 1 - q);
  long double fb = b == kInf ? (q > 1 ? 0.0L : kInf) : std::pow(b + s, 1 - q);
  return (fa - fb) / (q - 1);
}

// sum_{j=a}^{b-1} (j + s)^-q for q > 0, a + s > 0; b may be infinite (needs q > 1)
Interval power_range(long double q, long double s, long double a, long double b) {
  if (b <= a) return {0, 0};
  long double integral = power_integral(q, s, a, b);
  long double fa = std::pow(a + s, -q);
  long double fb = b == kInf ? 0.0L : std::pow(b + s, -q);
  return {integral, integral + fa - fb};
}

Interval scale(Interval x, long double f) {
  return f >= 0 ? Interval{x.lo * f, x.hi * f} : Interval{x.hi * f, x.lo * f};
}

Interval operator+(Interval x, Interval y) { return {x.lo + y.lo, x.hi + y.hi}; }

// sum_{y = i + s, i in [A, C)} i^alpha y^-rho, using (y-s)^alpha in [y^alpha - s y^(alpha-1), y^alpha]
// (exact at alpha = 1), s >= 0
Interval shifted_power_range(long double alpha, long double rho, long double s, long double A, long double C) {
  Interval p = power_range(rho - alpha, s, A, C);
  if (alpha == 0 || s == 0) return p;
  Interval q = power_range(rho - alpha + 1, s, A, C);
  if (alpha == 1) return {p.lo - s * q.hi, p.hi - s * q.lo};
  return {p.lo - s * q.hi, p.hi};
}

// geometric sums sum_{i >= N} i^alpha r^i, 0 < r < 1
Interval geometric_tail(long double alpha, long double r, long double N) {
  long double rn = std::pow(r, N);
  long double g0 = rn / (1 - r);
  long double g1 = rn * (N * (1 - r) + r) / ((1 - r) * (1 - r));
  if (alpha == 0) return {g0, g0};
  if (alpha == 1) return {g1, g1};
  return {std::sqrt(N) * g0, g1};
}

// tail sum_{i >= N} i^alpha / w(i + b) for the un-scaled family
Interval family_tail(const WeightFunction& w, long double alpha, long double b, long double N) {
  long double s = b + w.offset();
  switch (w.family()) {
    case WeightFamily::power:
      return shifted_power_range(alpha, w.rho(), s, N, kInf);
    case WeightFamily::power_log: {
      if (w.beta() < 0) throw Error("tail certification unavailable for powerlog with negative log exponent");
      // blocks [A, 2A) with the log factor frozen at the block ends
      Interval total{0, 0};
      long double A = N;
      // slowly converging case needs very long blocks before the crude tail is small
      const bool critical = w.rho() - alpha <= 1;
      const int blocks = critical ? 12000 : 200;
      for (int k = 0; k < blocks; ++k) {
        long double C = 2 * A;
        Interval p = shifted_power_range(alpha, w.rho(), s, A, C);
        long double lmax = std::pow(std::log1p(C + s), static_cast<long double>(w.beta()));
        long double lmin = std::pow(std::log1p(A + s), static_cast<long double>(w.beta()));
        total = total + Interval{p.lo / lmax, p.hi / lmin};
        A = C;
      }
      if (critical) {
        // i^a (i+s)^-rho <= (1 + |s|/x)^a / x with x = i + s, and the sum over x >= X of
        // 1/(x log^beta x) is at most 1/(X log^beta X) + log^(1-beta) X / (beta - 1)
        long double X = A + s;
        long double lx = std::log(X);
        long double f = std::pow(1 + std::fabs(s) / X, static_cast<long double>(alpha));
        long double be = w.beta();
        return total + Interval{0, f * (1 / (X * std::pow(lx, be)) + std::pow(lx, 1 - be) / (be - 1))};
      }
      Interval rest = shifted_power_range(alpha, w.rho(), s, A, kInf);
      long double lmin = std::pow(std::log1p(A + s), static_cast<long double>(w.beta()));
      return total + Interval{0, rest.hi / lmin};
    }
    case WeightFamily::exponential: {
      long double r = std::exp(-static_cast<long double>(w.lambda()));
      return scale(geometric_tail(alpha, r, N), std::exp(-w.lambda() * s));
    }
    case WeightFamily::osc_power: {
      // k = i + s split by parity: even k = 2j carries 3 k^-p, odd k = 2j + 1 carries k^-p
      long double p = 1 + w.rho();
      long double K = N + s;
      long double je = std::ceil(K / 2), jo = std::ceil((K - 1) / 2);
      Interval even, odd;
      if (alpha == 0 || s == 0) {
        even = scale(power_range(p - alpha, 0, je, kInf), 3 * std::pow(2.0L, alpha - p));
        odd = scale(power_range(p - alpha, 0.5L, jo, kInf), std::pow(2.0L, alpha - p));
      } else {
        Interval pe = scale(power_range(p - alpha, 0, je, kInf), 3 * std::pow(2.0L, alpha - p));
        Interval qe = scale(power_range(p - alpha + 1, 0, je, kInf), 3 * std::pow(2.0L, alpha - p - 1));
        Interval po = scale(power_range(p - alpha, 0.5L, jo, kInf), std::pow(2.0L, alpha - p));
        Interval qo = scale(power_range(p - alpha + 1, 0.5L, jo, kInf), std::pow(2.0L, alpha - p - 1));
        if (alpha == 1) {
          even = {pe.lo - s * qe.hi, pe.hi - s * qe.lo};
          odd = {po.lo - s * qo.hi, po.hi - s * qo.lo};
        } else {
          even = {pe.lo - s * qe.hi, pe.hi};
          odd = {po.lo - s * qo.hi, po.hi};
        }
      }
      return even + odd;
    }
    case WeightFamily::osc_exp: {
      // e^{-k(2 +- 1)} <= e^{-k}
      Interval g = scale(geometric_tail(alpha, std::exp(-1.0L), N), std::exp(-s));
      return {0, g.hi};
    }
    case WeightFamily::table: {
      auto n = static_cast<long double>(w.table_values().size());
      if (N + s < n) throw std::logic_error("table tail requested inside the table");
      return scale(family_tail(*w.tail(), alpha, b, N), 1 / to_long_double(w.tail()->scale()));
    }
  }
  return {0, kInf};
}

}  // namespace

CertifiedSum series_sum(const WeightFunction& w, double alpha, double b, std::int64_t start, double eps,
                        std::int64_t max_terms) {
  if (alpha != 0 && alpha != 0.5 && alpha != 1) throw Error("series exponent must be 0, 1/2 or 1");
  if (!(b >= 0)) throw Error("series shift must be non-negative");
  if (w.integer_domain() && std::floor(b) != b) throw Error("integer-domain weight needs an integer shift");
  if (!series_converges(w, alpha))
    throw DivergenceError("tail diverges: sum i^" + std::to_string(alpha) + "/w(i+b) for w = " + w.spec());
  std::int64_t first = std::max<std::int64_t>(start, alpha > 0 ? 1 : 0);
  // the explicit part must cover the table and the pre-asymptotic region of the integral bracket
  std::int64_t min_n = first + 64;
  if (w.family() == WeightFamily::table)
    min_n = std::max<std::int64_t>(min_n, static_cast<std::int64_t>(w.table_values().size()) + 1);
  if (w.family() == WeightFamily::power || w.family() == WeightFamily::power_log ||
      w.family() == WeightFamily::osc_power)
    min_n = std::max<std::int64_t>(min_n, static_cast<std::int64_t>(4 * (b + w.offset())) + 2);

  long double inv_scale = 1 / to_long_double(w.scale());
  long double sum = 0, comp = 0, abs_sum = 0;
  std::int64_t i = first;
  std::int64_t n = min_n;
  CertifiedSum out;
  while (true) {
    for (; i < n; ++i) {
      long double lw = w.log_value(static_cast<double>(i + b));
      long double t = alpha > 0 ? std::exp(alpha * std::log(static_cast<long double>(i)) - lw) : std::exp(-lw);
      long double y = sum + t;
      comp += std::fabs(sum) >= std::fabs(t) ? (sum - y) + t : (t - y) + sum;
      sum = y;
      abs_sum += t;
    }
    Interval tail = scale(family_tail(w, alpha, b, static_cast<long double>(n)), inv_scale);
    long double rounding = 64 * LDBL_EPSILON * abs_sum * std::log2(static_cast<long double>(n) + 2);
    long double total = sum + comp;
    out.lower = total + tail.lo - rounding;
    out.upper = total + tail.hi + rounding;
    if (out.lower < 0) out.lower = 0;
    out.value = (out.lower + out.upper) / 2;
    out.remainder = (out.upper - out.lower) / 2;
    out.terms = n - first;
    if (out.remainder <= eps || n >= max_terms) break;
    n = std::min<std::int64_t>(2 * n, max_terms);
  }
  return out;
}

CertifiedSum tail_sum_c(const WeightFunction& w, double b, double eps) {
  if (!(eps > 0)) throw Error("tolerance must be positive");
  auto s = series_sum(w, 0, b, 0, eps);
  if (s.remainder > eps)
    throw Error("tail sum for " + w.spec() + " reached only +-" + std::to_string(static_cast<double>(s.remainder)));
  return s;
}

CertifiedSum weighted_tail_sum(const WeightFunction& w, double alpha, double b, double eps) {
  if (alpha != 0.5 && alpha != 1) throw Error("weighted tail exponent must be 1/2 or 1");
  if (!(eps > 0)) throw Error("tolerance must be positive");
  auto s = series_sum(w, alpha, b, 1, eps);
  if (s.remainder > eps)
    throw Error("weighted tail sum for " + w.spec() + " reached only +-" +
                std::to_string(static_cast<double>(s.remainder)));
  return s;
}

}  // namespace rrw

namespace rrw {

Interval tail_interval(const WeightFunction& w, double alpha, double b, std::int64_t n) {
  if (!series_converges(w, alpha)) throw DivergenceError("tail diverges for w = " + w.spec());
  if (n < 1) throw Error("tail start must be positive");
  if (w.family() == WeightFamily::table && n + b < static_cast<double>(w.table_values().size()))
    throw Error("tail start inside the table prefix");
  Interval t = family_tail(w, alpha, b, static_cast<long double>(n));
  long double f = 1 / to_long_double(w.scale());
  return {std::max(0.0L, t.lo * f), t.hi * f};
}

}  // namespace rrw
