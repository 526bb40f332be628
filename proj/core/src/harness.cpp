#include "rrw/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "rrw/error.hpp"
#include "rrw/oracle.hpp"
#include "rrw/seed.hpp"

namespace rrw {

namespace {

std::size_t orderstat_index(WalkKind kind) { return kind == WalkKind::edge ? 2 : 3; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_set(const GraphModel& g, const std::vector<VertexId>& set) {
  std::string s;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) s += "|";
    s += g.format(set[i]);
  }
  return s;
}

}  // namespace

std::int64_t effective_window(const EnsembleConfig& c) {
  if (c.window > 0) return c.window;
  return std::min(c.horizon, std::max<std::int64_t>(10'000, c.horizon / 10));
}

std::shared_ptr<const GraphModel> build_graph(const EnsembleConfig& c) {
  auto g = GraphModel::parse(c.graph);
  if (c.root) g = g.with_root(VertexId{*c.root});
  return std::make_shared<const GraphModel>(std::move(g));
}

AttractionVerdict detect_attraction(const std::vector<VertexId>& trajectory, WalkKind kind, std::int64_t window) {
  const auto k = static_cast<std::int64_t>(trajectory.size()) - 1;
  if (window < 1) throw Error("attraction window must be positive");
  if (window > k) throw Error("attraction window " + std::to_string(window) + " longer than trajectory " +
                              std::to_string(k));
  AttractionVerdict v;
  v.window = window;
  auto edge = [&](std::int64_t j) {
    return EdgeId::make(trajectory[static_cast<std::size_t>(j - 1)], trajectory[static_cast<std::size_t>(j)]);
  };
  const EdgeId last = edge(k);
  std::int64_t run_start = k;
  while (run_start > 1 && edge(run_start - 1) == last) --run_start;
  std::int64_t start = kind == WalkKind::edge ? run_start : run_start - 1;
  if (start > k - window + 1 || (kind == WalkKind::vertex && window < 2)) return v;
  v.detected = true;
  v.stabilization_step = start;
  v.attracting_set = {last.a, last.b};
  return v;
}

EnsembleResult run_ensemble(const EnsembleConfig& c) {
  if (c.replicas < 0) throw Error("replica count must be non-negative");
  if (c.horizon < 0) throw Error("horizon must be non-negative");
  EnsembleResult r;
  r.config = c;
  r.window = c.replicas > 0 ? effective_window(c) : 0;
  if (r.window > c.horizon) throw Error("attraction window larger than horizon");
  if (c.replicas == 0) return r;

  auto graph = build_graph(c);
  WeightAssignment wa(WeightFunction::parse(c.weight), c.l0);
  RunOptions opt;
  opt.window = r.window;
  opt.engine = c.engine;
  opt.track_window_support = c.track_window_support;
  const std::size_t idx = orderstat_index(c.kind);

  r.runs.resize(static_cast<std::size_t>(c.replicas));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t i = next++; i < c.replicas; i = next++) {
      auto& rep = r.runs[static_cast<std::size_t>(i)];
      rep.index = i;
      rep.seed = derive_seed(c.seed, static_cast<std::uint64_t>(i));
      try {
        WalkState state(graph, c.kind, wa, rep.seed);
        rep.summary = state.run(c.horizon, opt);
        std::vector<std::int64_t> counts;
        for (const auto& e : rep.summary.final_counts) counts.push_back(e.count);
        rep.order_stat = order_statistic(std::move(counts), idx);
      } catch (const std::exception& ex) {
        rep.failed = true;
        rep.error = ex.what();
      }
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(c.workers, static_cast<unsigned>(c.replicas)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // fold in replica order
  for (const auto& rep : r.runs) {
    if (rep.failed) {
      ++r.failed;
      continue;
    }
    if (rep.summary.attraction && rep.summary.attraction->detected) ++r.detected;
    ++r.orderstat_table[rep.order_stat];
    if (c.track_window_support) ++r.window_support[rep.summary.window_support];
  }
  r.attraction = binomial_ci(r.detected, r.completed());
  return r;
}

BoundTable orderstat_bound_table(const EnsembleConfig& c) {
  auto g = build_graph(c);
  if (!g->is_finite()) throw Error("order-statistic bounds need a finite graph");
  auto w = WeightFunction::parse(c.weight);
  BoundTable t;
  t.kind = c.kind;
  t.graph = c.graph;
  t.weight = c.weight;
  t.l0 = c.l0;
  t.k = c.horizon;
  if (c.kind == WalkKind::edge) {
    int nbar = static_cast<int>(g->num_edges());
    for (std::int64_t ell = 0; ell <= c.horizon / 2; ++ell)
      t.values[ell] = errw_orderstat_bound(nbar, static_cast<std::int64_t>(g->num_vertices()), w, c.l0, c.horizon, ell);
  } else {
    int nbar = static_cast<int>(g->num_vertices());
    for (std::int64_t ell = 0; ell <= c.horizon / 3; ++ell)
      t.values[ell] = vrrw_orderstat_bound(nbar, w, c.l0, c.horizon, ell);
  }
  return t;
}

OrderstatComparison compare_orderstat_bound(const EnsembleResult& e, const BoundTable& bounds) {
  const auto& c = e.config;
  if (bounds.kind != c.kind || bounds.graph != c.graph || bounds.weight != c.weight || bounds.l0 != c.l0 ||
      bounds.k != c.horizon)
    throw Error("bound table was computed for a different configuration");
  OrderstatComparison out;
  const std::int64_t n = e.completed();
  for (const auto& [ell, b] : bounds.values) {
    OrderstatRow row;
    row.ell = ell;
    auto it = e.orderstat_table.find(ell);
    row.count = it == e.orderstat_table.end() ? 0 : it->second;
    row.frequency = n > 0 ? static_cast<double>(row.count) / static_cast<double>(n) : 0.0;
    row.ci = binomial_ci(row.count, n);
    row.bound = b;
    row.violation = row.count > 0 && static_cast<long double>(row.ci.lower) > b.x;
    out.violation = out.violation || row.violation;
    out.rows.push_back(row);
  }
  for (const auto& [ell, cnt] : e.orderstat_table)
    if (!bounds.values.count(ell)) throw Error("observed order statistic " + std::to_string(ell) + " has no bound");
  return out;
}

EscapeReport escape_statistics(const EnsembleResult& e, const std::vector<std::int64_t>& radii) {
  const auto& c = e.config;
  auto g = build_graph(c);
  if (c.kind != WalkKind::edge) throw Error("escape statistics are defined for the edge walk");
  WeightAssignment wa(WeightFunction::parse(c.weight), c.l0);
  EscapeReport rep;
  rep.p = stuck_probability_p(g->degree_bound(), wa).p;
  const std::int64_t n = e.completed();
  double prev = 1;
  for (auto radius : radii) {
    EscapeRow row;
    row.n = radius;
    for (const auto& run : e.runs)
      if (!run.failed && run.summary.range_radius_max > radius) ++row.exceed;
    row.frequency = n > 0 ? static_cast<double>(row.exceed) / static_cast<double>(n) : 0.0;
    row.sigma = n > 0 ? std::sqrt(row.frequency * (1 - row.frequency) / static_cast<double>(n)) : 0.0;
    row.bound = escape_bound(radius, rep.p);
    row.consistent = row.frequency <= row.bound + 3 * row.sigma;
    rep.consistent = rep.consistent && row.consistent;
    rep.rows.push_back(row);
  }
  std::vector<EscapeRow> sorted = rep.rows;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  for (const auto& row : sorted) {
    if (row.frequency > prev) rep.monotone = false;
    prev = row.frequency;
  }
  return rep;
}

AttractionHistogram attraction_time_histogram(const EnsembleResult& e) {
  AttractionHistogram h;
  std::map<int, std::int64_t> bins;
  for (const auto& run : e.runs) {
    if (run.failed || !run.summary.attraction || !run.summary.attraction->detected) continue;
    ++h.detected;
    std::int64_t s = run.summary.attraction->stabilization_step;
    int b = s <= 0 ? -1 : static_cast<int>(std::floor(std::log2(static_cast<double>(s))));
    ++bins[b];
  }
  for (auto [b, cnt] : bins) {
    HistogramBin bin;
    bin.lo = b < 0 ? 0 : std::int64_t{1} << b;
    bin.hi = b < 0 ? 1 : std::int64_t{1} << (b + 1);
    bin.count = cnt;
    h.bins.push_back(bin);
  }
  return h;
}

std::string replicas_csv(const EnsembleResult& e) {
  auto g = e.runs.empty() ? nullptr : build_graph(e.config);
  std::ostringstream os;
  os << "index,seed,failed,detected,attracting_set,stabilization_step,order_stat,range_radius_max,window_support,"
        "error\n";
  for (const auto& r : e.runs) {
    bool det = !r.failed && r.summary.attraction && r.summary.attraction->detected;
    os << r.index << ',' << r.seed << ',' << (r.failed ? 1 : 0) << ',' << (det ? 1 : 0) << ','
       << (det ? csv_escape(format_set(*g, r.summary.attraction->attracting_set)) : "") << ','
       << (det ? r.summary.attraction->stabilization_step : -1) << ',' << r.order_stat << ','
       << r.summary.range_radius_max << ',' << r.summary.window_support << ',' << csv_escape(r.error) << '\n';
  }
  return os.str();
}

std::string summary_csv_header() {
  return "schema_version,name,seed,graph,kind,weight,l0,engine,horizon,window,replicas,completed,failed,detected,"
         "fraction,ci_lower,ci_upper\n";
}

std::string summary_csv_row(const EnsembleResult& e) {
  const auto& c = e.config;
  std::ostringstream os;
  os.precision(17);
  os << kSchemaVersion << ',' << csv_escape(c.name) << ',' << c.seed << ',' << csv_escape(c.graph) << ','
     << to_string(c.kind) << ',' << csv_escape(c.weight) << ',' << c.l0 << ',' << to_string(c.engine) << ','
     << c.horizon << ',' << e.window << ',' << c.replicas << ',' << e.completed() << ',' << e.failed << ','
     << e.detected << ',' << e.attraction.estimate << ',' << e.attraction.lower << ',' << e.attraction.upper << '\n';
  return os.str();
}

std::vector<std::string> write_artifacts(const EnsembleResult& e, const std::string& dir, const std::string& format) {
  if (format != "csv" && format != "json") throw Error("unknown output format '" + format + "'");
  std::filesystem::create_directories(dir);
  const std::string stem = dir + "/" + e.config.name + "-" + std::to_string(e.config.seed);
  std::vector<std::string> written;
  auto put = [&](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << text;
    written.push_back(path);
  };
  if (format == "csv") put(stem + ".csv", replicas_csv(e));
  else put(stem + ".json", to_json(e));
  put(stem + "-summary.csv", summary_csv_header() + summary_csv_row(e));
  return written;
}

}  // namespace rrw
