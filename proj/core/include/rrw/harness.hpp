#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rrw/bounds.hpp"
#include "rrw/graph.hpp"
#include "rrw/stats.hpp"
#include "rrw/walk.hpp"
#include "rrw/weight.hpp"

namespace rrw {

inline constexpr int kSchemaVersion = 1;

struct EnsembleConfig {
  std::string name = "experiment";
  std::string graph = "triangle";
  std::optional<std::int64_t> root;
  WalkKind kind = WalkKind::edge;
  std::string weight = "power:2";
  double l0 = 1;
  std::int64_t replicas = 0;
  std::int64_t horizon = 0;
  // 0 selects max(10^4, K/10), capped at K
  std::int64_t window = 0;
  Engine engine = Engine::sequential;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool track_window_support = false;
  // free-form resolved configuration echoed into JSON output
  std::string resolved_config;
};

std::int64_t effective_window(const EnsembleConfig& c);

struct ReplicaResult {
  std::int64_t index = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  TrajectorySummary summary;
  // R_K^2 for ERRW, R_K^3 for VRRW
  std::int64_t order_stat = 0;
};

struct EnsembleResult {
  EnsembleConfig config;
  std::int64_t window = 0;
  std::vector<ReplicaResult> runs;
  std::int64_t failed = 0;
  std::int64_t detected = 0;
  ProportionCI attraction;
  std::map<std::int64_t, std::int64_t> orderstat_table;
  std::map<std::int64_t, std::int64_t> window_support;

  std::int64_t completed() const { return static_cast<std::int64_t>(runs.size()) - failed; }
};

std::shared_ptr<const GraphModel> build_graph(const EnsembleConfig& c);

EnsembleResult run_ensemble(const EnsembleConfig& c);

// offline monitor over the position sequence I_0..I_K
AttractionVerdict detect_attraction(const std::vector<VertexId>& trajectory, WalkKind kind, std::int64_t window);

struct BoundTable {
  WalkKind kind = WalkKind::edge;
  std::string graph;
  std::string weight;
  double l0 = 1;
  std::int64_t k = 0;
  std::map<std::int64_t, BoundValue> values;
};

// errw_orderstat_bound or vrrw_orderstat_bound for every admissible l
BoundTable orderstat_bound_table(const EnsembleConfig& c);

struct OrderstatRow {
  std::int64_t ell = 0;
  std::int64_t count = 0;
  double frequency = 0;
  ProportionCI ci;
  BoundValue bound;
  bool violation = false;
};

struct OrderstatComparison {
  std::vector<OrderstatRow> rows;
  bool violation = false;
};

OrderstatComparison compare_orderstat_bound(const EnsembleResult& e, const BoundTable& bounds);

struct EscapeRow {
  std::int64_t n = 0;
  std::int64_t exceed = 0;
  double frequency = 0;
  double sigma = 0;
  long double bound = 0;
  bool consistent = true;
};

struct EscapeReport {
  long double p = 0;
  std::vector<EscapeRow> rows;
  bool consistent = true;
  bool monotone = true;
};

EscapeReport escape_statistics(const EnsembleResult& e, const std::vector<std::int64_t>& radii);

struct HistogramBin {
  std::int64_t lo = 0;
  std::int64_t hi = 0;  // exclusive
  std::int64_t count = 0;
};

struct AttractionHistogram {
  std::vector<HistogramBin> bins;
  std::int64_t detected = 0;
  std::string caveat = "stabilization steps are lower estimates of the attraction time";
};

// log2 bins: [0,1), [1,2), [2,4), ...
AttractionHistogram attraction_time_histogram(const EnsembleResult& e);

std::string to_json(const EnsembleResult& e);
std::string replicas_csv(const EnsembleResult& e);
std::string summary_csv_header();
std::string summary_csv_row(const EnsembleResult& e);

// writes {name}-{seed}.{csv|json} and {name}-{seed}-summary.csv; returns the paths written
std::vector<std::string> write_artifacts(const EnsembleResult& e, const std::string& dir, const std::string& format);

}  // namespace rrw
