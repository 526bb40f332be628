#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "rrw/graph.hpp"
#include "rrw/weight.hpp"

namespace rrw {

enum class WalkKind { edge, vertex };
enum class Engine { sequential, rubin };

std::string to_string(WalkKind kind);
std::string to_string(Engine engine);
WalkKind parse_walk_kind(const std::string& s);
Engine parse_engine(const std::string& s);

struct Transition {
  VertexId to;
  double probability = 0;
};

struct TransitionDistribution {
  std::vector<Transition> entries;
  bool log_space = false;
};

struct AttractionVerdict {
  bool detected = false;
  // one edge (ERRW) or two adjacent vertices (VRRW); empty when not detected
  std::vector<VertexId> attracting_set;
  // first step of the final clean stretch; a lower estimate of the attraction time
  std::int64_t stabilization_step = -1;
  std::int64_t window = 0;
};

struct Snapshot {
  std::int64_t step = 0;
  std::vector<std::int64_t> order_stats;
};

struct ElementCount {
  std::vector<VertexId> element;  // two endpoints for an edge, one vertex otherwise
  std::int64_t count = 0;
};

struct TrajectorySummary {
  std::uint64_t seed = 0;
  WalkKind kind = WalkKind::edge;
  Engine engine = Engine::sequential;
  std::string graph;
  std::string weight;
  double l0 = 0;
  std::int64_t horizon = 0;
  std::vector<ElementCount> final_counts;
  std::vector<Snapshot> snapshots;
  std::int64_t range_radius_max = 0;
  std::optional<AttractionVerdict> attraction;
  // distinct vertices among the last `window` positions, when tracked
  std::int64_t window_support = 0;
};

class WalkState;

class Observer {
 public:
  virtual ~Observer() = default;
  virtual void observe(const WalkState& state) = 0;
};

struct RunOptions {
  enum class Stride { geometric, every, none };
  Stride stride = Stride::geometric;
  std::int64_t every = 1;
  std::size_t snapshot_depth = 4;
  // attraction window W; 0 disables the verdict
  std::int64_t window = 0;
  bool track_window_support = false;
  Engine engine = Engine::sequential;
};

// Uniform in [0,1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

class WalkState {
 public:
  WalkState(std::shared_ptr<const GraphModel> graph, WalkKind kind, WeightAssignment weights, std::uint64_t seed);

  WalkKind kind() const { return kind_; }
  const GraphModel& graph() const { return *graph_; }
  const WeightAssignment& weights() const { return *weights_; }
  VertexId current() const { return nodes_[cur_].id; }
  std::int64_t step_index() const { return k_; }
  std::uint64_t seed() const { return seed_; }
  std::mt19937_64& rng() { return rng_; }

  TransitionDistribution transition_distribution() const;

  // inverse-CDF draw over the ordered neighbour list, one uniform per step
  void step();
  // move to the i-th neighbour of the current vertex (neighbour order of the graph)
  void move_to_neighbor(std::size_t i);

  // log weights of the elements competing at the current vertex, in neighbour order
  const std::vector<long double>& competitor_log_weights() const;
  std::vector<VertexId> current_neighbors() const;

  std::int64_t count(EdgeId e) const;
  std::int64_t count(VertexId v) const;
  std::vector<ElementCount> counts() const;
  std::int64_t total_count() const;

  // counts sorted non-increasingly, padded with zeros to the elements in scope
  std::vector<std::int64_t> order_statistics() const;
  // i-th largest count, 1-based
  std::int64_t order_statistic(std::size_t i) const;

  std::int64_t range_radius_max() const { return radius_max_; }
  // first step of the final run of traversals of one edge (0 at k = 0)
  std::int64_t edge_run_start() const { return run_start_; }
  AttractionVerdict attraction(std::int64_t window) const;

  TrajectorySummary run(std::int64_t horizon, const RunOptions& options = {},
                        const std::vector<Observer*>& observers = {});

 private:
  struct Node {
    VertexId id;
    std::int64_t dist = 0;
    bool expanded = false;
    std::uint32_t begin = 0;
    std::uint32_t size = 0;
  };
  struct Table {
    const WeightFunction* w = nullptr;
    double l0 = 0;
    std::vector<double> value;  // +inf marks values above the log-space threshold
    std::vector<double> log_value;
    void extend(std::size_t n);
  };

  std::uint32_t node_index(VertexId v) const;
  void expand(std::uint32_t n) const;
  std::uint32_t element_class(const WeightEntry& e) const;
  void apply(std::uint32_t slot);
  bool fill_weights() const;

  std::shared_ptr<const GraphModel> graph_;
  WalkKind kind_;
  // shared so that weight tables keep valid pointers when the state is copied
  std::shared_ptr<const WeightAssignment> weights_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;

  // replica-local materialisation of the touched part of the graph
  mutable std::vector<Node> nodes_;
  mutable std::unordered_map<std::int64_t, std::uint32_t> index_;
  mutable std::vector<std::uint32_t> nbr_node_;
  mutable std::vector<std::uint32_t> nbr_elem_;
  mutable std::unordered_map<std::uint64_t, std::uint32_t> edge_index_;
  mutable std::vector<EdgeId> edges_;
  mutable std::vector<std::int64_t> counts_;
  mutable std::vector<std::uint16_t> elem_class_;
  mutable std::vector<Table> tables_;
  mutable std::vector<const WeightEntry*> class_entry_;
  mutable std::vector<double> wbuf_;
  mutable std::vector<long double> lbuf_;

  std::uint32_t cur_ = 0;
  std::int64_t k_ = 0;
  std::int64_t radius_max_ = 0;
  // attraction monitor
  std::uint64_t last_edge_key_ = UINT64_MAX;
  std::int64_t run_start_ = 0;
};

std::string to_json(const TrajectorySummary& s, const GraphModel& g);

}  // namespace rrw
