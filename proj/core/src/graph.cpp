#include "rrw/graph.hpp"

#include <algorithm>
#include <charconv>
#include <climits>
#include <deque>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "rrw/error.hpp"

namespace rrw {

struct GraphModel::Impl {
  GraphKind kind = GraphKind::finite_explicit;
  std::string spec;
  VertexId root;
  int degree_bound = 0;

  // finite kinds
  std::vector<VertexId> verts;
  std::vector<std::vector<std::uint32_t>> adj;
  std::vector<std::int64_t> dist;
  std::function<std::string(VertexId)> formatter;

  // lattice
  int dim = 0;
  int bits = 0;
  // tree
  int arity = 0;
  // custom
  NeighborFn fn;

  std::size_t find(VertexId v) const {
    auto it = std::lower_bound(verts.begin(), verts.end(), v);
    if (it == verts.end() || *it != v) return SIZE_MAX;
    return static_cast<std::size_t>(it - verts.begin());
  }
};

namespace {

using Impl = GraphModel::Impl;

std::int64_t lattice_offset(int bits) { return std::int64_t{1} << (bits - 1); }

std::vector<std::int64_t> decode_lattice(const Impl& g, VertexId v) {
  if (g.dim == 1) return {v.value};
  std::vector<std::int64_t> x(g.dim);
  std::uint64_t code = static_cast<std::uint64_t>(v.value);
  std::uint64_t mask = (std::uint64_t{1} << g.bits) - 1;
  for (int i = g.dim - 1; i >= 0; --i) {
    x[i] = static_cast<std::int64_t>(code & mask) - lattice_offset(g.bits);
    code >>= g.bits;
  }
  return x;
}

VertexId encode_lattice(const Impl& g, const std::vector<std::int64_t>& x) {
  if (static_cast<int>(x.size()) != g.dim) throw Error("lattice point has wrong dimension");
  if (g.dim == 1) {
    if (x[0] <= INT64_MIN / 2 || x[0] >= INT64_MAX / 2) throw Error("lattice coordinate out of range");
    return VertexId{x[0]};
  }
  std::int64_t off = lattice_offset(g.bits);
  std::uint64_t code = 0;
  for (int i = 0; i < g.dim; ++i) {
    if (x[i] <= -off || x[i] >= off - 1) throw Error("lattice coordinate out of encodable range");
    code = (code << g.bits) | static_cast<std::uint64_t>(x[i] + off);
  }
  return VertexId{static_cast<std::int64_t>(code)};
}

std::int64_t tree_depth(std::int64_t i, int a) {
  std::int64_t d = 0;
  while (i > 0) {
    i = (i - 1) / a;
    ++d;
  }
  return d;
}

std::int64_t tree_distance(std::int64_t u, std::int64_t v, int a) {
  std::int64_t du = tree_depth(u, a), dv = tree_depth(v, a), d = 0;
  while (du > dv) { u = (u - 1) / a; --du; ++d; }
  while (dv > du) { v = (v - 1) / a; --dv; ++d; }
  while (u != v) {
    u = (u - 1) / a;
    v = (v - 1) / a;
    d += 2;
  }
  return d;
}

void bfs_distances(Impl& g) {
  std::size_t r = g.find(g.root);
  if (r == SIZE_MAX) throw Error("root vertex " + std::to_string(g.root.value) + " not in graph");
  g.dist.assign(g.verts.size(), -1);
  std::deque<std::uint32_t> q{static_cast<std::uint32_t>(r)};
  g.dist[r] = 0;
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    for (auto w : g.adj[u])
      if (g.dist[w] < 0) {
        g.dist[w] = g.dist[u] + 1;
        q.push_back(w);
      }
  }
  for (auto d : g.dist)
    if (d < 0) throw Error("graph is not connected");
}

std::shared_ptr<Impl> build_finite(GraphKind kind, std::string spec,
                                   const std::vector<std::pair<std::int64_t, std::int64_t>>& edges,
                                   VertexId root) {
  auto g = std::make_shared<Impl>();
  g->kind = kind;
  g->spec = std::move(spec);
  g->root = root;
  std::set<std::int64_t> ids{root.value};
  for (auto [u, v] : edges) {
    if (u == v) throw Error("self loop at vertex " + std::to_string(u));
    ids.insert(u);
    ids.insert(v);
  }
  for (auto id : ids) g->verts.push_back(VertexId{id});
  g->adj.resize(g->verts.size());
  for (auto [u, v] : edges) {
    auto iu = static_cast<std::uint32_t>(g->find(VertexId{u}));
    auto iv = static_cast<std::uint32_t>(g->find(VertexId{v}));
    g->adj[iu].push_back(iv);
    g->adj[iv].push_back(iu);
  }
  for (auto& a : g->adj) {
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end()) throw Error("duplicate edge in edge list");
    g->degree_bound = std::max<int>(g->degree_bound, static_cast<int>(a.size()));
  }
  if (g->verts.size() > 1 && g->degree_bound == 0) throw Error("graph has no edges");
  bfs_distances(*g);
  return g;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw Error("graph spec: bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::finite_explicit: return "finite-explicit";
    case GraphKind::lattice: return "lattice";
    case GraphKind::regular_tree: return "regular-tree";
    case GraphKind::cycle: return "cycle";
    case GraphKind::complete: return "complete";
    case GraphKind::path: return "path";
    case GraphKind::star: return "star";
    case GraphKind::custom: return "custom";
  }
  return "?";
}

GraphModel GraphModel::from_edges(const std::vector<std::pair<std::int64_t, std::int64_t>>& edges,
                                  std::optional<std::int64_t> root) {
  if (edges.empty()) throw Error("edge list is empty");
  VertexId r{root.value_or(edges.front().first)};
  return GraphModel(build_finite(GraphKind::finite_explicit, "edges", edges, r));
}

GraphModel GraphModel::lattice(int dim) {
  if (dim < 1 || dim > 6) throw Error("lattice dimension must be in 1..6");
  auto g = std::make_shared<Impl>();
  g->kind = GraphKind::lattice;
  g->spec = "lattice:" + std::to_string(dim);
  g->dim = dim;
  g->bits = dim == 1 ? 63 : 63 / dim;
  g->degree_bound = 2 * dim;
  g->root = encode_lattice(*g, std::vector<std::int64_t>(dim, 0));
  return GraphModel(g);
}

GraphModel GraphModel::regular_tree(int arity) {
  if (arity < 1) throw Error("tree arity must be positive");
  auto g = std::make_shared<Impl>();
  g->kind = GraphKind::regular_tree;
  g->spec = "tree:" + std::to_string(arity);
  g->arity = arity;
  g->degree_bound = arity + 1;
  g->root = VertexId{0};
  return GraphModel(g);
}

GraphModel GraphModel::cycle(int n) {
  if (n < 3) throw Error("cycle needs at least 3 vertices");
  std::vector<std::pair<std::int64_t, std::int64_t>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return GraphModel(build_finite(GraphKind::cycle, "cycle:" + std::to_string(n), e, VertexId{0}));
}

GraphModel GraphModel::complete(int n) {
  if (n < 2) throw Error("complete graph needs at least 2 vertices");
  std::vector<std::pair<std::int64_t, std::int64_t>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return GraphModel(build_finite(GraphKind::complete, "complete:" + std::to_string(n), e, VertexId{0}));
}

GraphModel GraphModel::path(int n) {
  if (n < 2) throw Error("path needs at least 2 vertices");
  std::vector<std::pair<std::int64_t, std::int64_t>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return GraphModel(build_finite(GraphKind::path, "path:" + std::to_string(n), e, VertexId{0}));
}

GraphModel GraphModel::star(int n) {
  if (n < 1) throw Error("star needs at least one leaf");
  std::vector<std::pair<std::int64_t, std::int64_t>> e;
  for (int i = 1; i <= n; ++i) e.emplace_back(0, i);
  return GraphModel(build_finite(GraphKind::star, "star:" + std::to_string(n), e, VertexId{0}));
}

GraphModel GraphModel::custom(NeighborFn neighbors, VertexId root, int degree_bound, std::string name) {
  if (!neighbors) throw Error("custom generator needs a neighbour function");
  if (degree_bound < 1) throw Error("custom generator must declare a positive degree bound");
  auto g = std::make_shared<Impl>();
  g->kind = GraphKind::custom;
  g->spec = std::move(name);
  g->fn = std::move(neighbors);
  g->root = root;
  g->degree_bound = degree_bound;
  return GraphModel(g);
}

GraphModel GraphModel::parse(std::string_view spec) {
  auto parts = split(spec, ':');
  auto name = parts[0];
  auto arg = [&](std::size_t i) {
    if (parts.size() <= i) throw Error("graph spec '" + std::string(spec) + "' is missing a parameter");
    return parse_int(parts[i], "parameter");
  };
  if (name == "triangle") return complete(3);
  if (name == "cycle") return cycle(arg(1));
  if (name == "complete") return complete(arg(1));
  if (name == "path") return path(arg(1));
  if (name == "star") return star(arg(1));
  if (name == "lattice") return lattice(arg(1));
  if (name == "tree") return regular_tree(arg(1));
  if (name == "segment") {
    int n = arg(1);
    if (n < 3 || n % 2 == 0) throw Error("segment length must be odd and at least 3");
    return truncate(lattice(1), n / 2);
  }
  if (name == "box") return truncate(lattice(arg(1)), arg(2));
  if (name == "file") {
    if (parts.size() < 2) throw Error("graph spec 'file' needs a path");
    auto path = std::string(spec.substr(5));
    return load_edge_list_file(path);
  }
  throw Error("unknown graph family '" + std::string(name) + "'");
}

GraphModel GraphModel::with_root(VertexId root) const {
  auto g = std::make_shared<Impl>(*impl_);
  g->root = root;
  if (is_finite()) {
    bfs_distances(*g);
  } else if (g->kind == GraphKind::lattice) {
    decode_lattice(*g, root);
  } else if (g->kind == GraphKind::regular_tree && root.value < 0) {
    throw Error("tree vertex ids are non-negative");
  }
  return GraphModel(g);
}

GraphKind GraphModel::kind() const { return impl_->kind; }

bool GraphModel::is_finite() const {
  auto k = impl_->kind;
  return k != GraphKind::lattice && k != GraphKind::regular_tree && k != GraphKind::custom;
}

VertexId GraphModel::root() const { return impl_->root; }
int GraphModel::degree_bound() const { return impl_->degree_bound; }
const std::string& GraphModel::spec() const { return impl_->spec; }

std::vector<VertexId> GraphModel::neighbors(VertexId v) const {
  const Impl& g = *impl_;
  std::vector<VertexId> out;
  switch (g.kind) {
    case GraphKind::lattice: {
      auto x = decode_lattice(g, v);
      out.reserve(2 * g.dim);
      for (int i = 0; i < g.dim; ++i)
        for (int s : {-1, 1}) {
          auto y = x;
          y[i] += s;
          out.push_back(encode_lattice(g, y));
        }
      break;
    }
    case GraphKind::regular_tree: {
      std::int64_t i = v.value;
      if (i < 0) throw Error("tree vertex ids are non-negative");
      if (i > (INT64_MAX - g.arity) / g.arity) throw Error("tree address overflow");
      if (i > 0) out.push_back(VertexId{(i - 1) / g.arity});
      for (int c = 1; c <= g.arity; ++c) out.push_back(VertexId{g.arity * i + c});
      break;
    }
    case GraphKind::custom:
      out = g.fn(v);
      break;
    default: {
      auto i = g.find(v);
      if (i == SIZE_MAX) throw Error("unknown vertex " + std::to_string(v.value));
      out.reserve(g.adj[i].size());
      for (auto j : g.adj[i]) out.push_back(g.verts[j]);
      return out;
    }
  }
  std::sort(out.begin(), out.end());
  if (static_cast<int>(out.size()) > g.degree_bound)
    throw Error("vertex " + std::to_string(v.value) + " has degree " + std::to_string(out.size()) +
                " above the declared bound " + std::to_string(g.degree_bound));
  return out;
}

std::int64_t GraphModel::distance(VertexId v) const {
  const Impl& g = *impl_;
  switch (g.kind) {
    case GraphKind::lattice: {
      auto x = decode_lattice(g, v);
      auto r = decode_lattice(g, g.root);
      std::int64_t d = 0;
      for (int i = 0; i < g.dim; ++i) d += x[i] > r[i] ? x[i] - r[i] : r[i] - x[i];
      return d;
    }
    case GraphKind::regular_tree:
      if (v.value < 0) throw Error("tree vertex ids are non-negative");
      return tree_distance(v.value, g.root.value, g.arity);
    case GraphKind::custom: {
      constexpr std::size_t cap = 1'000'000;
      std::map<VertexId, std::int64_t> seen{{g.root, 0}};
      std::deque<VertexId> q{g.root};
      while (!q.empty()) {
        auto u = q.front();
        q.pop_front();
        if (u == v) return seen[u];
        for (auto w : neighbors(u))
          if (seen.emplace(w, seen[u] + 1).second) q.push_back(w);
        if (seen.size() > cap) throw BudgetError("distance search exceeded 1e6 vertices");
      }
      throw Error("vertex not reachable from root");
    }
    default: {
      auto i = g.find(v);
      if (i == SIZE_MAX) throw Error("unknown vertex " + std::to_string(v.value));
      return g.dist[i];
    }
  }
}

bool GraphModel::contains(VertexId v) const {
  const Impl& g = *impl_;
  switch (g.kind) {
    case GraphKind::lattice:
      if (g.dim == 1) return true;
      return v.value >= 0;
    case GraphKind::regular_tree: return v.value >= 0;
    case GraphKind::custom: return true;
    default: return g.find(v) != SIZE_MAX;
  }
}

std::size_t GraphModel::num_vertices() const {
  if (!is_finite()) throw Error("vertex count of an infinite graph");
  return impl_->verts.size();
}

std::size_t GraphModel::num_edges() const {
  if (!is_finite()) throw Error("edge count of an infinite graph");
  std::size_t s = 0;
  for (auto& a : impl_->adj) s += a.size();
  return s / 2;
}

const std::vector<VertexId>& GraphModel::vertices() const {
  if (!is_finite()) throw Error("vertex list of an infinite graph");
  return impl_->verts;
}

std::vector<EdgeId> GraphModel::edges() const {
  if (!is_finite()) throw Error("edge list of an infinite graph");
  std::vector<EdgeId> out;
  const Impl& g = *impl_;
  for (std::size_t i = 0; i < g.verts.size(); ++i)
    for (auto j : g.adj[i])
      if (i < j) out.push_back(EdgeId{g.verts[i], g.verts[j]});
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t GraphModel::index_of(VertexId v) const {
  if (!is_finite()) throw Error("dense index of an infinite graph");
  auto i = impl_->find(v);
  if (i == SIZE_MAX) throw Error("unknown vertex " + std::to_string(v.value));
  return i;
}

std::string GraphModel::format(VertexId v) const {
  const Impl& g = *impl_;
  if (g.formatter) return g.formatter(v);
  if (g.kind == GraphKind::lattice && g.dim > 1) {
    auto x = decode_lattice(g, v);
    std::string s = "(";
    for (int i = 0; i < g.dim; ++i) s += (i ? "," : "") + std::to_string(x[i]);
    return s + ")";
  }
  return std::to_string(v.value);
}

int GraphModel::lattice_dim() const { return impl_->dim; }
int GraphModel::tree_arity() const { return impl_->arity; }

VertexId GraphModel::lattice_point(const std::vector<std::int64_t>& coords) const {
  if (impl_->kind != GraphKind::lattice) throw Error("not a lattice");
  return encode_lattice(*impl_, coords);
}

std::vector<std::int64_t> GraphModel::lattice_coords(VertexId v) const {
  if (impl_->kind != GraphKind::lattice) throw Error("not a lattice");
  return decode_lattice(*impl_, v);
}

Bipartition is_bipartite(const GraphModel& g) {
  Bipartition out;
  if (g.kind() == GraphKind::lattice || g.kind() == GraphKind::regular_tree) {
    out.bipartite = true;
    out.by_rule = true;
    return out;
  }
  if (g.kind() == GraphKind::custom) throw Error("bipartiteness of a custom generator is not known");
  const auto& vs = g.vertices();
  std::vector<int> color(vs.size(), -1);
  for (std::size_t s = 0; s < vs.size(); ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::deque<std::size_t> q{s};
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      for (auto w : g.neighbors(vs[u])) {
        auto j = g.index_of(w);
        if (color[j] < 0) {
          color[j] = 1 - color[u];
          q.push_back(j);
        } else if (color[j] == color[u]) {
          return out;
        }
      }
    }
  }
  out.bipartite = true;
  for (std::size_t i = 0; i < vs.size(); ++i) (color[i] == 0 ? out.side1 : out.side2).push_back(vs[i]);
  return out;
}

bool is_triangle_free(const GraphModel& g) {
  if (g.kind() == GraphKind::lattice || g.kind() == GraphKind::regular_tree) return true;
  if (g.kind() == GraphKind::custom) throw Error("triangle-freeness of a custom generator is not known");
  for (auto e : g.edges()) {
    auto na = g.neighbors(e.a);
    auto nb = g.neighbors(e.b);
    std::vector<VertexId> common;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
    if (!common.empty()) return false;
  }
  return true;
}

GraphModel truncate(const GraphModel& g, int radius) {
  if (radius < 1) throw Error("truncation radius must be at least 1");
  std::map<VertexId, int> depth{{g.root(), 0}};
  std::deque<VertexId> q{g.root()};
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    int du = depth[u];
    for (auto w : g.neighbors(u)) {
      auto it = depth.find(w);
      if (it == depth.end()) {
        if (du == radius) continue;
        depth.emplace(w, du + 1);
        q.push_back(w);
      }
      if (u < w) edges.emplace_back(u.value, w.value);
    }
  }
  if (edges.empty()) throw Error("truncation produced no edges");
  auto impl = build_finite(GraphKind::finite_explicit,
                           "truncate(" + g.spec() + "," + std::to_string(radius) + ")", edges, g.root());
  impl->formatter = [g](VertexId v) { return g.format(v); };
  return GraphModel(impl);
}

GraphModel load_edge_list(std::istream& in, std::optional<std::int64_t> root) {
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::int64_t u, v;
    if (!(ls >> u)) continue;
    std::string rest;
    if (!(ls >> v) || (ls >> rest))
      throw Error("edge list line " + std::to_string(lineno) + ": expected two integers");
    edges.emplace_back(u, v);
  }
  return GraphModel::from_edges(edges, root);
}

GraphModel load_edge_list_file(const std::string& path, std::optional<std::int64_t> root) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open edge list '" + path + "'");
  return load_edge_list(f, root);
}

}  // namespace rrw
