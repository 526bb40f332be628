#include "rrw/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

#include "rrw/error.hpp"

namespace rrw {

namespace {

constexpr long double kOutward = 1e-12L;

struct NotExact {};

template <class Num>
Num weight_at(const WeightFunction& w, double x);

template <>
Rational weight_at<Rational>(const WeightFunction& w, double x) {
  auto v = w.exact(x);
  if (!v) throw NotExact{};
  return *v;
}

template <>
long double weight_at<long double>(const WeightFunction& w, double x) {
  return w.value_ld(x);
}

// exact when possible, otherwise long double rounded up
template <class F>
BoundValue dispatch(F&& f) {
  try {
    return BoundValue::of(f.template operator()<Rational>());
  } catch (const NotExact&) {
  }
  return BoundValue::of(f.template operator()<long double>() * (1 + kOutward));
}

double round_up(long double x) {
  double d = static_cast<double>(x);
  if (static_cast<long double>(d) < x) d = std::nextafter(d, INFINITY);
  return d;
}

double round_down(long double x) {
  double d = static_cast<double>(x);
  if (static_cast<long double>(d) > x) d = std::nextafter(d, -INFINITY);
  return d;
}

template <class Num>
Num from_upper(long double x) {
  if constexpr (std::is_same_v<Num, Rational>) return Rational(round_up(x));
  else return x * (1 + kOutward);
}

template <class Num>
Num pow_int(Num x, int e) {
  Num r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

template <class Num>
Num factorial(int n) {
  Num f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// certified upper bound of c(b)
// certified bracket of sum_{i >= start} i^alpha / w(i + b), cached per weight
CertifiedSum series_bracket(const WeightFunction& w, double alpha, double b, std::int64_t start) {
  static std::mutex mu;
  static std::map<std::tuple<std::string, double, double, std::int64_t>, CertifiedSum> cache;
  auto key = std::make_tuple(w.spec(), alpha, b, start);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto v = series_sum(w, alpha, b, start, alpha == 0 ? 1e-12 : 1e-4, 1 << 20);
  std::lock_guard lock(mu);
  cache.emplace(key, v);
  return v;
}

long double series_upper(const WeightFunction& w, double alpha, double b, std::int64_t start) {
  return series_bracket(w, alpha, b, start).upper;
}

long double c_upper(const WeightFunction& w, double b) { return series_upper(w, 0, b, 0); }

// Q_m with weights w(b + h) / scale, memoised on (slots, budget, cap)
template <class Num>
class QmSolver {
 public:
  QmSolver(const WeightFunction& w, double b, Num scale) : w_(w), b_(b), scale_(std::move(scale)) {}

  Num inv(std::int64_t h) {
    while (static_cast<std::int64_t>(inv_.size()) <= h)
      inv_.push_back(scale_ / weight_at<Num>(w_, b_ + static_cast<double>(inv_.size())));
    return inv_[static_cast<std::size_t>(h)];
  }

  Num q(int m, std::int64_t a, std::int64_t cap) {
    if (a < 0) return Num(0);
    if (m == 0) return a == 0 ? Num(1) : Num(0);
    cap = std::min(cap, a);
    if (a > m * cap) return Num(0);
    auto key = std::make_tuple(m, a, cap);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Num s = 0;
    // h is the largest part, so at least ceil(a/m)
    for (std::int64_t h = (a + m - 1) / m; h <= cap; ++h) s += inv(h) * q(m - 1, a - h, h);
    memo_.emplace(key, s);
    return s;
  }

 private:
  const WeightFunction& w_;
  double b_;
  Num scale_;
  std::vector<Num> inv_;
  std::map<std::tuple<int, std::int64_t, std::int64_t>, Num> memo_;
};

template <class Num>
Num qm_min(const Num& a, const Num& b) {
  return a < b ? a : b;
}

void check_counts_total(std::int64_t total, std::int64_t k) {
  if (k < 0) throw Error("k must be non-negative");
  if (total != k)
    throw Error("count vector sums to " + std::to_string(total) + ", expected k = " + std::to_string(k));
}

}  // namespace

BoundValue BoundValue::of(const Rational& r) {
  BoundValue v;
  v.exact = true;
  v.q = r;
  v.x = to_long_double(r);
  return v;
}

BoundValue BoundValue::of(long double x) {
  BoundValue v;
  v.x = x;
  return v;
}

std::string BoundValue::str() const {
  if (exact) return q.get_str();
  std::ostringstream os;
  os.precision(21);
  os << x;
  return os.str();
}

bool dominated(const Rational& lhs, const BoundValue& rhs) {
  if (rhs.exact) return lhs <= rhs.q;
  return lhs <= Rational(round_down(rhs.x));
}

BoundValue q_m(int m, std::int64_t a, double b, std::optional<std::int64_t> c, const WeightFunction& w) {
  if (m < 1) throw Error("Q_m needs m >= 1");
  if (c && *c < 0) return BoundValue::of(Rational(0));
  std::int64_t cap = c ? *c : std::max<std::int64_t>(a, 0);
  return dispatch([&]<class Num>() -> Num {
    QmSolver<Num> s(w, b, Num(1));
    return s.q(m, a, cap);
  });
}

BoundValue q_m_enumerate(int m, std::int64_t a, double b, std::int64_t c, const WeightFunction& w) {
  if (m < 1) throw Error("Q_m needs m >= 1");
  return dispatch([&]<class Num>() -> Num {
    Num total = 0;
    std::vector<std::int64_t> h(static_cast<std::size_t>(m));
    // list every h^1 >= ... >= h^m >= 0 with h^1 <= c summing to a; branches that cannot
    // reach a are cut
    std::function<void(int, std::int64_t, std::int64_t)> rec = [&](int i, std::int64_t cap, std::int64_t left) {
      if (i == m) {
        if (left != 0) return;
        Num p = 1;
        for (auto x : h) p /= weight_at<Num>(w, b + static_cast<double>(x));
        total += p;
        return;
      }
      const std::int64_t slots = m - i;
      for (std::int64_t x = std::min(cap, left); x >= 0 && x * slots >= left; --x) {
        h[static_cast<std::size_t>(i)] = x;
        rec(i + 1, x, left - x);
      }
    };
    if (a >= 0 && c >= 0) rec(0, c, a);
    return total;
  });
}

CBoundCheck c_bound_check(int m, std::int64_t a, std::int64_t j, double b, const WeightFunction& w,
                          std::optional<std::int64_t> c) {
  if (m < 1 || a < 0 || j < 0) throw Error("c_bound_check: need m >= 1, a >= 0, j >= 0");
  CBoundCheck r;
  r.lhs = dispatch([&]<class Num>() -> Num {
    QmSolver<Num> s(w, b, Num(1));
    Num total = 0;
    for (std::int64_t t = 0; t <= j; ++t) total += s.q(m, t + a, c ? *c : t + a);
    return total;
  });
  auto cs = series_bracket(w, 0, b, 0);
  r.rhs_lower = std::pow(cs.lower, static_cast<long double>(m)) * (1 - kOutward);
  r.rhs_upper = std::pow(cs.upper, static_cast<long double>(m)) * (1 + kOutward);
  r.pass = r.lhs.exact ? r.lhs.q <= Rational(round_down(r.rhs_lower)) : r.lhs.x <= r.rhs_lower;
  return r;
}

BoundValue errw_joint_bound(const GraphModel& g, const WeightAssignment& wa,
                            const std::map<EdgeId, std::int64_t>& counts, std::int64_t k, VertexId landing) {
  if (!g.is_finite()) throw Error("joint bound needs a finite graph");
  auto edges = g.edges();
  std::int64_t total = 0;
  for (auto& [e, c] : counts) {
    if (!std::binary_search(edges.begin(), edges.end(), e)) throw Error("count given for a non-edge");
    if (c < 0) throw Error("negative count");
    total += c;
  }
  check_counts_total(total, k);
  g.index_of(landing);
  const VertexId root = g.root();
  return dispatch([&]<class Num>() -> Num {
    Num prod0 = 1, prodl = 1, sum_landing = 0;
    std::optional<Num> min0;
    for (auto e : edges) {
      const auto& entry = wa.for_edge(e);
      auto it = counts.find(e);
      std::int64_t c = it == counts.end() ? 0 : it->second;
      Num w0 = weight_at<Num>(entry.w, entry.l0);
      Num wl = weight_at<Num>(entry.w, entry.l0 + static_cast<double>(c));
      prod0 *= w0;
      prodl *= wl;
      if (e.a == root || e.b == root) min0 = min0 ? qm_min(*min0, w0) : w0;
      if (e.a == landing || e.b == landing) sum_landing += wl;
    }
    return prod0 / *min0 * sum_landing / prodl;
  });
}

BoundValue vrrw_joint_bound(const GraphModel& g, const WeightAssignment& wa,
                            const std::map<VertexId, std::int64_t>& counts, std::int64_t k, VertexId landing) {
  if (!g.is_finite()) throw Error("joint bound needs a finite graph");
  std::int64_t total = 0;
  for (auto& [v, c] : counts) {
    g.index_of(v);
    if (c < 0) throw Error("negative count");
    total += c;
  }
  check_counts_total(total, k);
  g.index_of(landing);
  const VertexId root = g.root();
  auto root_nbrs = g.neighbors(root);
  auto landing_nbrs = g.neighbors(landing);
  return dispatch([&]<class Num>() -> Num {
    Num prod0 = 1, prodl = 1, sum_landing = 0;
    std::optional<Num> min0;
    for (auto v : g.vertices()) {
      const auto& entry = wa.for_vertex(v);
      auto it = counts.find(v);
      std::int64_t c = it == counts.end() ? 0 : it->second;
      Num w0 = weight_at<Num>(entry.w, entry.l0);
      Num wl = weight_at<Num>(entry.w, entry.l0 + static_cast<double>(c));
      if (v != root) prod0 *= w0;
      if (v != landing) prodl *= wl;
      if (std::binary_search(root_nbrs.begin(), root_nbrs.end(), v)) min0 = min0 ? qm_min(*min0, w0) : w0;
      if (std::binary_search(landing_nbrs.begin(), landing_nbrs.end(), v)) sum_landing += wl;
    }
    return prod0 / *min0 * sum_landing / prodl;
  });
}

BoundValue errw_orderstat_constant(int nbar, std::int64_t num_vertices, const WeightFunction& w, double l0) {
  if (nbar < 3) throw Error("order-statistic bound needs at least 3 elements");
  long double cu = c_upper(w, l0);
  return dispatch([&]<class Num>() -> Num {
    Num ct = from_upper<Num>(cu) / weight_at<Num>(w, l0);
    return Num(num_vertices) * factorial<Num>(nbar) * Num(nbar - 1) * pow_int(ct, nbar - 2);
  });
}

BoundValue vrrw_orderstat_constant(int nbar, const WeightFunction& w, double l0) {
  if (nbar < 3) throw Error("order-statistic bound needs at least 3 vertices");
  long double cu = c_upper(w, l0);
  return dispatch([&]<class Num>() -> Num {
    Num ct = from_upper<Num>(cu) / weight_at<Num>(w, l0);
    // A = nbar/2 + C(nbar-1, 2) - 1
    Num A = Num(nbar) / 2 + Num((nbar - 1) * (nbar - 2) / 2) - Num(1);
    return Num(2 * nbar) * factorial<Num>(nbar) * pow_int(ct, nbar - 3) * (A + Num(nbar - 1));
  });
}

BoundValue bipartite_orderstat_constant(int nbar, const WeightFunction& w, double l0) {
  auto cls = classify(w, l0);
  if (!cls.classifiable || !cls.supinfv1) throw DivergenceError("bipartite bound needs sum i^(1/2)/w(i+l0) < inf");
  auto base = vrrw_orderstat_constant(nbar, w, l0);
  long double w0 = w.value_ld(l0);
  long double ct = c_upper(w, l0) / w0;
  long double half = series_upper(w, 0.5, l0, 1) / w0;
  return BoundValue::of(base.x * ct * (1 + half) * (1 + kOutward));
}

BoundValue errw_orderstat_bound(int nbar, std::int64_t num_vertices, const WeightFunction& w, double l0,
                                std::int64_t k, std::int64_t ell2) {
  if (nbar < 3) throw Error("order-statistic bound needs at least 3 edges");
  if (k < 0 || ell2 < 0 || ell2 > k / 2)
    throw Error("second order statistic " + std::to_string(ell2) + " out of range [0, " + std::to_string(k / 2) + "]");
  auto C = errw_orderstat_constant(nbar, num_vertices, w, l0);
  auto inner = dispatch([&]<class Num>() -> Num {
    Num s0 = weight_at<Num>(w, l0);
    QmSolver<Num> qs(w, l0, s0);
    Num sum = 0;
    for (std::int64_t i = std::max<std::int64_t>(k / nbar, ell2); i <= k - ell2; ++i) {
      std::int64_t rest = k - i - ell2;
      sum += qs.inv(i) * qs.q(nbar - 2, rest, rest);
    }
    return qs.inv(ell2) + sum;
  });
  if (C.exact && inner.exact) return BoundValue::of(C.q * inner.q);
  return BoundValue::of(C.x * inner.x * (1 + kOutward));
}

namespace {

// sum_{i=ell}^{k-ell} w(l0)/w(i+l0) and w(l0)/w(ell+l0)
template <class Num>
std::pair<Num, Num> vrrw_parts(const WeightFunction& w, double l0, std::int64_t k, std::int64_t ell) {
  Num s0 = weight_at<Num>(w, l0);
  Num sum = 0;
  for (std::int64_t i = ell; i <= k - ell; ++i) sum += s0 / weight_at<Num>(w, l0 + static_cast<double>(i));
  return {s0 / weight_at<Num>(w, l0 + static_cast<double>(ell)), sum};
}

BoundValue product(const BoundValue& a, const BoundValue& b) {
  if (a.exact && b.exact) return BoundValue::of(a.q * b.q);
  return BoundValue::of(a.x * b.x * (1 + kOutward));
}

void check_ell3(std::int64_t k, std::int64_t ell3) {
  if (k < 0 || ell3 < 0 || ell3 > k / 3)
    throw Error("third order statistic " + std::to_string(ell3) + " out of range [0, " + std::to_string(k / 3) + "]");
}

}  // namespace

BoundValue vrrw_orderstat_bound(int nbar, const WeightFunction& w, double l0, std::int64_t k, std::int64_t ell3) {
  check_ell3(k, ell3);
  auto C = vrrw_orderstat_constant(nbar, w, l0);
  auto inner = dispatch([&]<class Num>() -> Num {
    auto [first, sum] = vrrw_parts<Num>(w, l0, k, ell3);
    return Num(ell3) * first + sum;
  });
  return product(C, inner);
}

BoundValue bipartite_orderstat_bound(int nbar, int side1, int side2, const WeightFunction& w, double l0,
                                     std::int64_t k, std::int64_t ell3) {
  if (side1 < 1 || side2 < 1 || side1 + side2 != nbar) throw Error("bipartition sizes do not add up to nbar");
  if (k < 1) throw Error("bipartite bound needs k >= 1");
  check_ell3(k, ell3);
  auto C = bipartite_orderstat_constant(nbar, w, l0);
  auto [first, sum] = vrrw_parts<long double>(w, l0, k, ell3);
  long double inner = std::sqrt(static_cast<long double>(ell3)) * first + sum / std::sqrt(static_cast<long double>(k));
  return BoundValue::of(C.x * inner * (1 + kOutward));
}

BoundValue bipartite_orderstat_bound(const GraphModel& g, const WeightFunction& w, double l0, std::int64_t k,
                                     std::int64_t ell3) {
  if (!g.is_finite()) throw Error("bipartite bound needs a finite graph");
  auto bp = is_bipartite(g);
  if (!bp.bipartite) throw Error("graph " + g.spec() + " is not bipartite");
  return bipartite_orderstat_bound(static_cast<int>(g.num_vertices()), static_cast<int>(bp.side1.size()),
                                   static_cast<int>(bp.side2.size()), w, l0, k, ell3);
}

BoundValue bipartite_bipbip_bound(const GraphModel& g, const WeightFunction& w, double l0, std::int64_t k,
                                  std::int64_t ell3) {
  if (!g.is_finite()) throw Error("bipartite bound needs a finite graph");
  if (!is_bipartite(g).bipartite) throw Error("graph " + g.spec() + " is not bipartite");
  auto cls = classify(w, l0);
  if (!cls.classifiable || !cls.bipbip) throw DivergenceError("bound needs sup_i i/w(i+l0) < inf");
  check_ell3(k, ell3);
  int nbar = static_cast<int>(g.num_vertices());
  auto base = vrrw_orderstat_constant(nbar, w, l0);
  long double w0 = w.value_ld(l0);
  long double ct = c_upper(w, l0) / w0;
  // i/w(i+l0) tends to zero under the condition; its maximum is reached early
  long double sup = 0;
  for (std::int64_t i = 1; i <= 1'000'000; ++i)
    sup = std::max(sup, static_cast<long double>(i) * w0 / w.value_ld(l0 + static_cast<double>(i)));
  long double C = base.x * ct * (1 + sup);
  return BoundValue::of(C * w0 / w.value_ld(l0 + static_cast<double>(ell3)) * (1 + kOutward));
}

BoundValue triangle_free_orderstat_bound(const GraphModel& g, const WeightFunction& w, double l0, std::int64_t k,
                                         std::int64_t ell3) {
  if (!g.is_finite()) throw Error("triangle-free bound needs a finite graph");
  if (!is_triangle_free(g)) throw Error("graph " + g.spec() + " contains a triangle");
  if (k < 1) throw Error("triangle-free bound needs k >= 1");
  check_ell3(k, ell3);
  int nbar = static_cast<int>(g.num_vertices());
  auto C = bipartite_orderstat_constant(nbar, w, l0);
  auto [first, sum] = vrrw_parts<long double>(w, l0, k, ell3);
  long double inner = std::sqrt(static_cast<long double>(ell3)) * first + sum / std::sqrt(static_cast<long double>(k));
  return BoundValue::of(C.x * inner * (1 + kOutward));
}

StuckProbability stuck_probability_p(int degree, const WeightAssignment& wa) {
  if (degree < 1) throw Error("degree bound must be positive");
  StuckProbability r;
  r.sup_initial_weight = wa.sup_initial_weight();
  const long double scale = degree * r.sup_initial_weight;
  r.p = 1;
  r.product_form = 1;
  for (const auto* e : wa.entries()) {
    if (!series_converges(e->w, 0)) throw DivergenceError("stuck probability needs sum 1/w < inf; " + e->w.spec());
    long double s = series_sum(e->w, 0, e->l0, 1, 1e-12).upper;
    r.series_upper = std::max(r.series_upper, s);
    r.p = std::min(r.p, std::exp(-2 * scale * s));
    constexpr std::int64_t n = 100000;
    long double logsum = 0;
    for (std::int64_t i = 1; i <= n; ++i) logsum += std::log1p(scale / e->w.value_ld(e->l0 + static_cast<double>(i)));
    logsum += scale * tail_interval(e->w, 0, e->l0, n + 1).hi;
    r.product_form = std::min(r.product_form, std::exp(-2 * logsum));
  }
  return r;
}

long double escape_bound(std::int64_t n, long double p) {
  if (n < 1) throw Error("escape radius must be at least 1");
  if (!(p > 0 && p < 1)) throw Error("stuck probability must lie in (0, 1)");
  return std::pow(1 - p, static_cast<long double>(n / 2));
}

BoundValue permuted_orderstat_bound(const WeightFunction& w, const std::vector<double>& l0s,
                                    const std::vector<std::int64_t>& ells, const PermutedOptions& opt) {
  const std::size_t n = l0s.size();
  if (n == 0 || ells.size() != n) throw Error("permuted bound: l0 and count lists must have equal nonzero length");
  if (opt.kind == WalkKind::vertex && opt.root_index >= n) throw Error("permuted bound: root index out of range");
  bool equal = std::all_of(l0s.begin(), l0s.end(), [&](double x) { return x == l0s[0]; });
  if (!equal && n > 9) throw BudgetError("enumeration budget exceeded: " + std::to_string(n) + "! permutations");
  return dispatch([&]<class Num>() -> Num {
    std::vector<Num> w0(n);
    for (std::size_t i = 0; i < n; ++i) w0[i] = weight_at<Num>(w, l0s[i]);
    Num minw = *std::min_element(w0.begin(), w0.end());
    Num pre = 1;
    for (std::size_t i = 0; i < n; ++i)
      if (opt.kind == WalkKind::edge || i != opt.root_index) pre *= w0[i];
    pre /= minw;

    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<Num> wl(n);
    auto term = [&]() -> Num {
      for (std::size_t i = 0; i < n; ++i) wl[i] = weight_at<Num>(w, l0s[sigma[i]] + static_cast<double>(ells[i]));
      Num all = 1, sum = 0;
      for (auto& x : wl) {
        all *= x;
        sum += x;
      }
      if (opt.kind == WalkKind::edge) return sum / all;
      // sum_j sum_{i != j} w_i / prod_{i != j} w_i
      Num t = 0;
      for (std::size_t j = 0; j < n; ++j) t += (sum - wl[j]) * wl[j] / all;
      return t;
    };
    Num total = 0;
    if (equal) {
      total = term() * factorial<Num>(static_cast<int>(n));
    } else {
      do total += term();
      while (std::next_permutation(sigma.begin(), sigma.end()));
    }
    Num agg = 1;
    if (opt.aggregate) agg = opt.kind == WalkKind::edge ? Num(opt.num_vertices) : Num(static_cast<long>(n));
    return agg * pre * total;
  });
}

}  // namespace rrw
