#include "rrw/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "rrw/error.hpp"
#include "rrw/rubin.hpp"

namespace rrw {

namespace {

constexpr double kLogThreshold = 690.7755278982137;  // log(1e300)
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

std::string to_string(WalkKind kind) { return kind == WalkKind::edge ? "edge" : "vertex"; }
std::string to_string(Engine engine) { return engine == Engine::sequential ? "sequential" : "rubin"; }

WalkKind parse_walk_kind(const std::string& s) {
  if (s == "edge" || s == "errw") return WalkKind::edge;
  if (s == "vertex" || s == "vrrw") return WalkKind::vertex;
  throw Error("unknown walk kind '" + s + "' (expected edge or vertex)");
}

Engine parse_engine(const std::string& s) {
  if (s == "sequential") return Engine::sequential;
  if (s == "rubin") return Engine::rubin;
  throw Error("unknown engine '" + s + "' (expected sequential or rubin)");
}

void WalkState::Table::extend(std::size_t n) {
  std::size_t target = std::max(n, value.size() * 2);
  value.reserve(target);
  log_value.reserve(target);
  w->tabulate(l0 + static_cast<double>(value.size()), target - value.size(), kLogThreshold, value, log_value);
}

WalkState::WalkState(std::shared_ptr<const GraphModel> graph, WalkKind kind, WeightAssignment weights,
                     std::uint64_t seed)
    : graph_(std::move(graph)), kind_(kind), weights_(std::make_shared<const WeightAssignment>(std::move(weights))), seed_(seed), rng_(seed) {
  if (!graph_) throw Error("walk needs a graph");
  cur_ = node_index(graph_->root());
  if (graph_->is_finite()) {
    for (auto v : graph_->vertices()) expand(node_index(v));
  } else {
    expand(cur_);
  }
}

std::uint32_t WalkState::element_class(const WeightEntry& e) const {
  for (std::size_t i = 0; i < class_entry_.size(); ++i)
    if (class_entry_[i] == &e) return static_cast<std::uint32_t>(i);
  class_entry_.push_back(&e);
  Table t;
  t.w = &e.w;
  t.l0 = e.l0;
  t.extend(64);
  tables_.push_back(std::move(t));
  return static_cast<std::uint32_t>(tables_.size() - 1);
}

std::uint32_t WalkState::node_index(VertexId v) const {
  auto it = index_.find(v.value);
  if (it != index_.end()) return it->second;
  auto n = static_cast<std::uint32_t>(nodes_.size());
  Node node;
  node.id = v;
  node.dist = graph_->distance(v);
  nodes_.push_back(node);
  index_.emplace(v.value, n);
  if (kind_ == WalkKind::vertex) {
    counts_.push_back(0);
    elem_class_.push_back(static_cast<std::uint16_t>(element_class(weights_->for_vertex(v))));
  }
  return n;
}

void WalkState::expand(std::uint32_t n) const {
  if (nodes_[n].expanded) return;
  auto nbrs = graph_->neighbors(nodes_[n].id);
  if (nbrs.empty()) throw Error("vertex " + graph_->format(nodes_[n].id) + " has no neighbours");
  auto begin = static_cast<std::uint32_t>(nbr_node_.size());
  for (auto u : nbrs) {
    auto j = node_index(u);
    nbr_node_.push_back(j);
    if (kind_ == WalkKind::edge) {
      auto key = edge_key(n, j);
      auto it = edge_index_.find(key);
      std::uint32_t e;
      if (it == edge_index_.end()) {
        e = static_cast<std::uint32_t>(edges_.size());
        auto id = EdgeId::make(nodes_[n].id, u);
        edges_.push_back(id);
        counts_.push_back(0);
        elem_class_.push_back(static_cast<std::uint16_t>(element_class(weights_->for_edge(id))));
        edge_index_.emplace(key, e);
      } else {
        e = it->second;
      }
      nbr_elem_.push_back(e);
    } else {
      nbr_elem_.push_back(j);
    }
  }
  nodes_[n].begin = begin;
  nodes_[n].size = static_cast<std::uint32_t>(nbrs.size());
  nodes_[n].expanded = true;
}

// fills wbuf_ with the competitor weights; above 1e300 they are rescaled by the largest one in
// log space and true is returned
bool WalkState::fill_weights() const {
  expand(cur_);
  const Node& nd = nodes_[cur_];
  wbuf_.resize(nd.size);
  bool log_space = false;
  for (std::uint32_t j = 0; j < nd.size; ++j) {
    auto e = nbr_elem_[nd.begin + j];
    Table& t = tables_[elem_class_[e]];
    auto c = static_cast<std::size_t>(counts_[e]);
    if (c >= t.value.size()) t.extend(c + 1);
    double v = t.value[c];
    if (v == kInf) log_space = true;
    wbuf_[j] = v;
  }
  if (!log_space) return false;
  lbuf_.resize(nd.size);
  long double mx = -std::numeric_limits<long double>::infinity();
  for (std::uint32_t j = 0; j < nd.size; ++j) {
    auto e = nbr_elem_[nd.begin + j];
    lbuf_[j] = tables_[elem_class_[e]].log_value[static_cast<std::size_t>(counts_[e])];
    mx = std::max(mx, lbuf_[j]);
  }
  for (std::uint32_t j = 0; j < nd.size; ++j) wbuf_[j] = static_cast<double>(std::exp(lbuf_[j] - mx));
  return true;
}

TransitionDistribution WalkState::transition_distribution() const {
  TransitionDistribution out;
  out.log_space = fill_weights();
  const Node& nd = nodes_[cur_];
  long double total = 0;
  for (double v : wbuf_) total += v;
  for (std::uint32_t j = 0; j < nd.size; ++j)
    out.entries.push_back({nodes_[nbr_node_[nd.begin + j]].id, static_cast<double>(wbuf_[j] / total)});
  return out;
}

void WalkState::step() {
  fill_weights();
  const std::size_t n = wbuf_.size();
  double total = 0;
  for (double v : wbuf_) total += v;
  double target = uniform01(rng_) * total;
  std::size_t pick = n - 1;
  double cum = 0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    cum += wbuf_[j];
    if (target < cum) {
      pick = j;
      break;
    }
  }
  apply(static_cast<std::uint32_t>(pick));
}

void WalkState::move_to_neighbor(std::size_t i) {
  expand(cur_);
  if (i >= nodes_[cur_].size) throw Error("neighbour index out of range");
  apply(static_cast<std::uint32_t>(i));
}

void WalkState::apply(std::uint32_t slot) {
  const Node& nd = nodes_[cur_];
  auto j = nbr_node_[nd.begin + slot];
  auto e = nbr_elem_[nd.begin + slot];
  ++counts_[e];
  auto key = edge_key(cur_, j);
  ++k_;
  if (key != last_edge_key_) {
    last_edge_key_ = key;
    run_start_ = k_;
  }
  cur_ = j;
  radius_max_ = std::max(radius_max_, nodes_[j].dist);
}

const std::vector<long double>& WalkState::competitor_log_weights() const {
  expand(cur_);
  const Node& nd = nodes_[cur_];
  lbuf_.resize(nd.size);
  for (std::uint32_t j = 0; j < nd.size; ++j) {
    auto e = nbr_elem_[nd.begin + j];
    Table& t = tables_[elem_class_[e]];
    auto c = static_cast<std::size_t>(counts_[e]);
    if (c >= t.value.size()) t.extend(c + 1);
    lbuf_[j] = t.log_value[c];
  }
  return lbuf_;
}

std::vector<VertexId> WalkState::current_neighbors() const {
  expand(cur_);
  const Node& nd = nodes_[cur_];
  std::vector<VertexId> out;
  for (std::uint32_t j = 0; j < nd.size; ++j) out.push_back(nodes_[nbr_node_[nd.begin + j]].id);
  return out;
}

std::int64_t WalkState::count(EdgeId e) const {
  auto a = index_.find(e.a.value), b = index_.find(e.b.value);
  if (a == index_.end() || b == index_.end()) return 0;
  auto it = edge_index_.find(edge_key(a->second, b->second));
  if (kind_ != WalkKind::edge) throw Error("edge counts requested from a vertex walk");
  return it == edge_index_.end() ? 0 : counts_[it->second];
}

std::int64_t WalkState::count(VertexId v) const {
  if (kind_ != WalkKind::vertex) throw Error("vertex counts requested from an edge walk");
  auto it = index_.find(v.value);
  return it == index_.end() ? 0 : counts_[it->second];
}

std::vector<ElementCount> WalkState::counts() const {
  std::vector<ElementCount> out;
  if (kind_ == WalkKind::edge) {
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (counts_[e] > 0) out.push_back({{edges_[e].a, edges_[e].b}, counts_[e]});
  } else {
    for (std::size_t v = 0; v < nodes_.size(); ++v)
      if (counts_[v] > 0) out.push_back({{nodes_[v].id}, counts_[v]});
  }
  std::sort(out.begin(), out.end(), [](const ElementCount& x, const ElementCount& y) { return x.element < y.element; });
  return out;
}

std::int64_t WalkState::total_count() const {
  std::int64_t s = 0;
  for (auto c : counts_) s += c;
  return s;
}

std::vector<std::int64_t> WalkState::order_statistics() const {
  std::vector<std::int64_t> r(counts_.begin(), counts_.end());
  std::sort(r.begin(), r.end(), std::greater<>());
  return r;
}

std::int64_t WalkState::order_statistic(std::size_t i) const {
  if (i == 0) throw Error("order statistics are 1-based");
  if (i > counts_.size()) return 0;
  std::vector<std::int64_t> r(counts_.begin(), counts_.end());
  std::nth_element(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(i - 1), r.end(), std::greater<>());
  return r[i - 1];
}

AttractionVerdict WalkState::attraction(std::int64_t window) const {
  if (window < 1) throw Error("attraction window must be positive");
  if (window > k_) throw Error("attraction window " + std::to_string(window) + " longer than trajectory " +
                               std::to_string(k_));
  AttractionVerdict v;
  v.window = window;
  if (k_ == 0) return v;
  // ERRW: steps run_start..k traverse one edge. VRRW: positions run_start-1..k stay on its endpoints.
  std::int64_t start = kind_ == WalkKind::edge ? run_start_ : run_start_ - 1;
  bool ok = start <= k_ - window + 1 && (kind_ == WalkKind::edge || window >= 2);
  if (!ok) return v;
  v.detected = true;
  v.stabilization_step = start;
  auto a = static_cast<std::uint32_t>(last_edge_key_ >> 32);
  auto b = static_cast<std::uint32_t>(last_edge_key_ & 0xffffffffu);
  v.attracting_set = {nodes_[a].id, nodes_[b].id};
  std::sort(v.attracting_set.begin(), v.attracting_set.end());
  return v;
}

TrajectorySummary WalkState::run(std::int64_t horizon, const RunOptions& options,
                                 const std::vector<Observer*>& observers) {
  if (horizon < 0) throw Error("horizon must be non-negative");
  if (options.window > horizon) throw Error("attraction window larger than horizon");
  TrajectorySummary s;
  s.seed = seed_;
  s.kind = kind_;
  s.engine = options.engine;
  s.graph = graph_->spec();
  s.weight = weights_->default_entry().w.spec();
  s.l0 = weights_->default_entry().l0;
  s.horizon = horizon;

  auto snapshot = [&] {
    Snapshot snap;
    snap.step = k_;
    auto r = order_statistics();
    r.resize(std::min(r.size(), options.snapshot_depth));
    snap.order_stats = std::move(r);
    s.snapshots.push_back(std::move(snap));
    for (auto* o : observers) o->observe(*this);
  };

  std::vector<std::uint32_t> ring;
  if (options.track_window_support && options.window > 0) ring.assign(static_cast<std::size_t>(options.window), UINT32_MAX);
  std::int64_t next = 1;
  std::int64_t last_snap = -1;
  const std::int64_t end = k_ + horizon;
  if (horizon == 0) {
    snapshot();
    last_snap = k_;
  }
  while (k_ < end) {
    if (options.engine == Engine::sequential) step();
    else embedded_step(*this);
    if (!ring.empty()) ring[static_cast<std::size_t>(k_ % options.window)] = cur_;
    bool take = false;
    if (options.stride == RunOptions::Stride::geometric) {
      if (k_ >= next) {
        take = true;
        while (next <= k_) next *= 2;
      }
    } else if (options.stride == RunOptions::Stride::every) {
      take = options.every > 0 && k_ % options.every == 0;
    }
    if (take) {
      snapshot();
      last_snap = k_;
    }
  }
  if (last_snap != k_) snapshot();

  s.final_counts = counts();
  s.range_radius_max = radius_max_;
  if (options.window > 0 && horizon > 0) s.attraction = attraction(options.window);
  if (!ring.empty()) {
    std::unordered_set<std::uint32_t> seen;
    for (auto v : ring)
      if (v != UINT32_MAX) seen.insert(v);
    s.window_support = static_cast<std::int64_t>(seen.size());
  }
  return s;
}

}  // namespace rrw
