#include <json.hpp>

#include "rrw/bounds.hpp"
#include "rrw/harness.hpp"
#include "rrw/walk.hpp"

namespace rrw {

namespace {

using nlohmann::ordered_json;

ordered_json value_json(const BoundValue& v) {
  ordered_json j;
  j["exact"] = v.exact;
  if (v.exact) {
    j["numerator"] = v.q.get_num().get_str();
    j["denominator"] = v.q.get_den().get_str();
  }
  j["value"] = static_cast<double>(v.x);
  return j;
}

ordered_json vertex_list(const GraphModel& g, const std::vector<VertexId>& vs) {
  ordered_json a = ordered_json::array();
  for (auto v : vs) a.push_back(g.format(v));
  return a;
}

ordered_json verdict_json(const GraphModel& g, const AttractionVerdict& v) {
  ordered_json j;
  j["detected"] = v.detected;
  j["attracting_set"] = vertex_list(g, v.attracting_set);
  j["stabilization_step"] = v.stabilization_step;
  j["window"] = v.window;
  return j;
}

ordered_json config_json(const EnsembleConfig& c) {
  ordered_json j;
  j["name"] = c.name;
  j["seed"] = c.seed;
  j["graph"] = c.graph;
  if (c.root) j["root"] = *c.root;
  j["kind"] = to_string(c.kind);
  j["weight"] = c.weight;
  j["initial_weight"] = c.l0;
  j["engine"] = to_string(c.engine);
  j["horizon"] = c.horizon;
  j["replicas"] = c.replicas;
  j["window"] = c.window;
  return j;
}

ordered_json ci_json(const ProportionCI& ci) {
  return ordered_json{{"estimate", ci.estimate}, {"lower", ci.lower}, {"upper", ci.upper}, {"confidence", 0.95}};
}

}  // namespace

std::string to_json(const TrajectorySummary& s, const GraphModel& g) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = s.seed;
  j["kind"] = to_string(s.kind);
  j["engine"] = to_string(s.engine);
  j["graph"] = s.graph;
  j["weight"] = s.weight;
  j["initial_weight"] = s.l0;
  j["horizon"] = s.horizon;
  ordered_json counts = ordered_json::array();
  for (const auto& e : s.final_counts) counts.push_back({{"element", vertex_list(g, e.element)}, {"count", e.count}});
  j["final_counts"] = counts;
  ordered_json snaps = ordered_json::array();
  for (const auto& sn : s.snapshots) snaps.push_back({{"step", sn.step}, {"order_stats", sn.order_stats}});
  j["snapshots"] = snaps;
  j["range_radius_max"] = s.range_radius_max;
  if (s.attraction) j["attraction"] = verdict_json(g, *s.attraction);
  j["window_support"] = s.window_support;
  return j.dump(2);
}

std::string to_json(const BoundReport& r) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = r.name;
  j["formula"] = r.formula;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  ordered_json vals = ordered_json::object();
  for (const auto& [k, v] : r.values) vals[k] = value_json(v);
  j["values"] = vals;
  ordered_json rem = ordered_json::object();
  for (const auto& [k, v] : r.remainders) rem[k] = static_cast<double>(v);
  j["remainders"] = rem;
  return j.dump(2);
}

std::string to_json(const EnsembleResult& e) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_json(e.config);
  if (!e.config.resolved_config.empty()) j["resolved_config"] = e.config.resolved_config;
  j["window"] = e.window;
  j["completed"] = e.completed();
  j["failed"] = e.failed;
  j["detected"] = e.detected;
  j["attraction"] = ci_json(e.attraction);
  ordered_json table = ordered_json::array();
  for (auto [ell, n] : e.orderstat_table) table.push_back({{"value", ell}, {"count", n}});
  j[e.config.kind == WalkKind::edge ? "order_stat_2" : "order_stat_3"] = table;
  if (e.config.track_window_support) {
    ordered_json ws = ordered_json::array();
    for (auto [s, n] : e.window_support) ws.push_back({{"support", s}, {"count", n}});
    j["window_support"] = ws;
  }
  auto hist = attraction_time_histogram(e);
  ordered_json bins = ordered_json::array();
  for (const auto& b : hist.bins) bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}});
  j["attraction_time_histogram"] = {{"bins", bins}, {"caveat", hist.caveat}};

  std::shared_ptr<const GraphModel> g = e.runs.empty() ? nullptr : build_graph(e.config);
  ordered_json runs = ordered_json::array();
  for (const auto& r : e.runs) {
    ordered_json x;
    x["index"] = r.index;
    x["seed"] = r.seed;
    x["failed"] = r.failed;
    if (r.failed) {
      x["error"] = r.error;
    } else {
      if (r.summary.attraction) x["attraction"] = verdict_json(*g, *r.summary.attraction);
      x["order_stat"] = r.order_stat;
      x["range_radius_max"] = r.summary.range_radius_max;
      if (!r.summary.snapshots.empty()) x["final_order_stats"] = r.summary.snapshots.back().order_stats;
      if (e.config.track_window_support) x["window_support"] = r.summary.window_support;
    }
    runs.push_back(x);
  }
  j["replicas"] = runs;
  return j.dump(2);
}

}  // namespace rrw
