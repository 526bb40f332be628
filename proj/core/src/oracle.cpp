#include "rrw/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "rrw/error.hpp"

namespace rrw {

namespace {

struct Arc {
  std::size_t to;
  std::size_t elem;
};

struct Layout {
  std::vector<std::vector<Arc>> adj;
  std::vector<const WeightEntry*> entry;  // per element
  std::size_t root = 0;
};

Layout make_layout(const GraphModel& g, WalkKind kind, const WeightAssignment& wa) {
  if (!g.is_finite()) throw Error("the oracle needs a finite graph");
  Layout l;
  const auto& verts = g.vertices();
  auto edges = g.edges();
  l.adj.resize(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (auto u : g.neighbors(verts[i])) {
      std::size_t j = g.index_of(u);
      std::size_t elem = j;
      if (kind == WalkKind::edge) {
        auto e = EdgeId::make(verts[i], u);
        elem = static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), e) - edges.begin());
      }
      l.adj[i].push_back({j, elem});
    }
  }
  if (kind == WalkKind::edge)
    for (auto e : edges) l.entry.push_back(&wa.for_edge(e));
  else
    for (auto v : verts) l.entry.push_back(&wa.for_vertex(v));
  l.root = g.index_of(g.root());
  return l;
}

template <class Num>
Num weight_value(const WeightFunction& w, double x) {
  if constexpr (std::is_same_v<Num, Rational>) {
    auto v = w.exact(x);
    if (!v) throw Error("weight " + w.spec() + " is not rational at " + std::to_string(x));
    return *v;
  } else {
    return w.value_ld(x);
  }
}

}  // namespace

std::uint64_t path_budget(const GraphModel& g, int k) {
  if (!g.is_finite()) throw Error("the oracle needs a finite graph");
  if (k < 0) throw Error("k must be non-negative");
  std::size_t d = 0;
  for (auto v : g.vertices()) d = std::max(d, g.neighbors(v).size());
  long double b = std::pow(static_cast<long double>(d), static_cast<long double>(k));
  if (b > kOracleBudget)
    throw BudgetError("path budget " + std::to_string(d) + "^" + std::to_string(k) + " = " +
                      std::to_string(static_cast<double>(b)) + " exceeds " + std::to_string(kOracleBudget));
  return static_cast<std::uint64_t>(b);
}

bool oracle_exact(const GraphModel& g, WalkKind kind, const WeightAssignment& wa, int k) {
  auto l = make_layout(g, kind, wa);
  for (const auto* e : l.entry)
    for (int c = 0; c <= k; ++c)
      if (!e->w.exact(e->l0 + c)) return false;
  return true;
}

template <class Num>
void for_each_path(const GraphModel& g, WalkKind kind, const WeightAssignment& wa, int k,
                   const PathVisitor<Num>& visit) {
  path_budget(g, k);
  auto l = make_layout(g, kind, wa);
  // weight of element e at count c, c <= k
  std::vector<std::vector<Num>> table(l.entry.size());
  for (std::size_t e = 0; e < l.entry.size(); ++e)
    for (int c = 0; c <= k; ++c) table[e].push_back(weight_value<Num>(l.entry[e]->w, l.entry[e]->l0 + c));

  std::vector<std::size_t> path{l.root};
  std::vector<std::int64_t> counts(l.entry.size(), 0);
  OraclePath view{path, counts};

  std::function<void(const Num&)> dfs = [&](const Num& prob) {
    if (static_cast<int>(path.size()) == k + 1) {
      visit(view, prob);
      return;
    }
    const auto& arcs = l.adj[path.back()];
    Num total = 0;
    for (const auto& a : arcs) total += table[a.elem][static_cast<std::size_t>(counts[a.elem])];
    for (const auto& a : arcs) {
      Num p = prob * table[a.elem][static_cast<std::size_t>(counts[a.elem])] / total;
      ++counts[a.elem];
      path.push_back(a.to);
      dfs(p);
      path.pop_back();
      --counts[a.elem];
    }
  };
  dfs(Num(1));
}

template <class Num>
std::vector<PathAtom<Num>> enumerate_paths(const GraphModel& g, WalkKind kind, const WeightAssignment& wa, int k) {
  std::vector<PathAtom<Num>> out;
  const auto& verts = g.vertices();
  PathVisitor<Num> visit = [&](const OraclePath& p, const Num& prob) {
    PathAtom<Num> a;
    for (auto i : p.vertices) a.vertices.push_back(verts[i]);
    a.counts = p.counts;
    a.prob = prob;
    out.push_back(std::move(a));
  };
  for_each_path<Num>(g, kind, wa, k, visit);
  return out;
}

std::int64_t order_statistic(std::vector<std::int64_t> counts, std::size_t i) {
  if (i == 0) throw Error("order statistics are 1-based");
  if (i > counts.size()) return 0;
  std::nth_element(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(i - 1), counts.end(),
                   std::greater<>());
  return counts[i - 1];
}

template void for_each_path<Rational>(const GraphModel&, WalkKind, const WeightAssignment&, int,
                                      const PathVisitor<Rational>&);
template void for_each_path<long double>(const GraphModel&, WalkKind, const WeightAssignment&, int,
                                         const PathVisitor<long double>&);
template std::vector<PathAtom<Rational>> enumerate_paths<Rational>(const GraphModel&, WalkKind,
                                                                   const WeightAssignment&, int);
template std::vector<PathAtom<long double>> enumerate_paths<long double>(const GraphModel&, WalkKind,
                                                                         const WeightAssignment&, int);

}  // namespace rrw
