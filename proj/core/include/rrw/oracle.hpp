#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "rrw/graph.hpp"
#include "rrw/rational.hpp"
#include "rrw/walk.hpp"
#include "rrw/weight.hpp"

namespace rrw {

inline constexpr std::uint64_t kOracleBudget = 10'000'000;

// D^k for the maximal degree D; throws BudgetError above kOracleBudget
std::uint64_t path_budget(const GraphModel& g, int k);

// true when every weight the enumeration can touch is rational
bool oracle_exact(const GraphModel& g, WalkKind kind, const WeightAssignment& wa, int k);

// state handed to visitors; indices refer to g.vertices() and, for edges, g.edges()
struct OraclePath {
  const std::vector<std::size_t>& vertices;
  const std::vector<std::int64_t>& counts;
};

template <class Num>
using PathVisitor = std::function<void(const OraclePath&, const Num&)>;

// depth-first over all k-step paths from the root; Num is Rational or long double
template <class Num>
void for_each_path(const GraphModel& g, WalkKind kind, const WeightAssignment& wa, int k, const PathVisitor<Num>& visit);

template <class Num>
struct PathAtom {
  std::vector<VertexId> vertices;
  std::vector<std::int64_t> counts;
  Num prob;
};

template <class Num>
std::vector<PathAtom<Num>> enumerate_paths(const GraphModel& g, WalkKind kind, const WeightAssignment& wa, int k);

template <class Num>
Num exact_event_probability(const std::vector<PathAtom<Num>>& paths,
                            const std::function<bool(const PathAtom<Num>&)>& pred) {
  Num s = 0;
  for (const auto& a : paths)
    if (pred(a)) s += a.prob;
  return s;
}

// i-th largest count, 1-based
std::int64_t order_statistic(std::vector<std::int64_t> counts, std::size_t i);

template <class Num>
std::map<std::int64_t, Num> exact_orderstat_distribution(const std::vector<PathAtom<Num>>& paths, std::size_t i) {
  std::map<std::int64_t, Num> dist;
  for (const auto& a : paths) dist[order_statistic(a.counts, i)] += a.prob;
  return dist;
}

}  // namespace rrw
