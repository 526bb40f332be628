#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rrw {

struct VertexId {
  std::int64_t value = 0;
  auto operator<=>(const VertexId&) const = default;
};

struct EdgeId {
  VertexId a;
  VertexId b;
  static EdgeId make(VertexId u, VertexId v) { return u < v ? EdgeId{u, v} : EdgeId{v, u}; }
  auto operator<=>(const EdgeId&) const = default;
};

enum class GraphKind { finite_explicit, lattice, regular_tree, cycle, complete, path, star, custom };

std::string to_string(GraphKind kind);

using NeighborFn = std::function<std::vector<VertexId>(VertexId)>;

// Immutable graph description. Finite kinds hold an explicit adjacency; lattice, tree and
// custom kinds compute neighbours on demand.
class GraphModel {
 public:
  static GraphModel from_edges(const std::vector<std::pair<std::int64_t, std::int64_t>>& edges,
                               std::optional<std::int64_t> root = std::nullopt);
  static GraphModel lattice(int dim);
  static GraphModel regular_tree(int arity);
  static GraphModel cycle(int n);
  static GraphModel complete(int n);
  static GraphModel path(int n);
  // center 0 and leaves 1..n
  static GraphModel star(int n);
  static GraphModel custom(NeighborFn neighbors, VertexId root, int degree_bound,
                           std::string name = "custom");

  // "cycle:4", "complete:3", "path:5", "star:4", "lattice:2", "tree:3", "segment:11",
  // "box:2:3" (lattice dim 2 truncated at radius 3), "file:edges.txt"
  static GraphModel parse(std::string_view spec);

  GraphModel with_root(VertexId root) const;

  GraphKind kind() const;
  bool is_finite() const;
  VertexId root() const;
  int degree_bound() const;
  const std::string& spec() const;

  std::vector<VertexId> neighbors(VertexId v) const;
  std::int64_t distance(VertexId v) const;
  bool contains(VertexId v) const;

  // finite graphs only; vertices sorted by id
  std::size_t num_vertices() const;
  std::size_t num_edges() const;
  const std::vector<VertexId>& vertices() const;
  std::vector<EdgeId> edges() const;
  std::size_t index_of(VertexId v) const;

  std::string format(VertexId v) const;

  int lattice_dim() const;
  int tree_arity() const;
  VertexId lattice_point(const std::vector<std::int64_t>& coords) const;
  std::vector<std::int64_t> lattice_coords(VertexId v) const;

  struct Impl;

 private:
  friend GraphModel truncate(const GraphModel& g, int radius);
  explicit GraphModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct Bipartition {
  bool bipartite = false;
  // true when answered from the family rule without traversal (infinite kinds)
  bool by_rule = false;
  std::vector<VertexId> side1;
  std::vector<VertexId> side2;
};

Bipartition is_bipartite(const GraphModel& g);
bool is_triangle_free(const GraphModel& g);
GraphModel truncate(const GraphModel& g, int radius);

GraphModel load_edge_list(std::istream& in, std::optional<std::int64_t> root = std::nullopt);
GraphModel load_edge_list_file(const std::string& path,
                               std::optional<std::int64_t> root = std::nullopt);

}  // namespace rrw
