#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rrw/graph.hpp"
#include "rrw/rational.hpp"
#include "rrw/series.hpp"
#include "rrw/walk.hpp"
#include "rrw/weight.hpp"

namespace rrw {

// A bound value: exact rational when every weight involved is rational, otherwise a long double
// rounded outward (upwards for upper bounds).
struct BoundValue {
  bool exact = false;
  Rational q;
  long double x = 0;

  static BoundValue of(const Rational& r);
  static BoundValue of(long double v);
  std::string str() const;
};

// lhs <= rhs, decided exactly when rhs is exact and conservatively otherwise
bool dominated(const Rational& lhs, const BoundValue& rhs);

struct BoundReport {
  std::string name;
  std::string formula;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, BoundValue>> values;
  std::vector<std::pair<std::string, long double>> remainders;
};

std::string to_json(const BoundReport& r);

// c = nullopt means no cap
BoundValue q_m(int m, std::int64_t a, double b, std::optional<std::int64_t> c, const WeightFunction& w);
// reference value by listing every ordered tuple
BoundValue q_m_enumerate(int m, std::int64_t a, double b, std::int64_t c, const WeightFunction& w);

struct CBoundCheck {
  BoundValue lhs;             // sum_{s=0}^{j} Q_m(s + a; b; c)
  long double rhs_lower = 0;  // certified bracket of c(b)^m
  long double rhs_upper = 0;
  bool pass = false;          // lhs <= rhs_lower
};

CBoundCheck c_bound_check(int m, std::int64_t a, std::int64_t j, double b, const WeightFunction& w,
                          std::optional<std::int64_t> c = std::nullopt);

BoundValue errw_joint_bound(const GraphModel& g, const WeightAssignment& wa,
                            const std::map<EdgeId, std::int64_t>& counts, std::int64_t k, VertexId landing);

BoundValue vrrw_joint_bound(const GraphModel& g, const WeightAssignment& wa,
                            const std::map<VertexId, std::int64_t>& counts, std::int64_t k, VertexId landing);

// constants of the order-statistic bounds (rescaled weights, equal initial weights)
BoundValue errw_orderstat_constant(int nbar, std::int64_t num_vertices, const WeightFunction& w, double l0);
BoundValue vrrw_orderstat_constant(int nbar, const WeightFunction& w, double l0);
BoundValue bipartite_orderstat_constant(int nbar, const WeightFunction& w, double l0);

BoundValue errw_orderstat_bound(int nbar, std::int64_t num_vertices, const WeightFunction& w, double l0,
                                std::int64_t k, std::int64_t ell2);
BoundValue vrrw_orderstat_bound(int nbar, const WeightFunction& w, double l0, std::int64_t k, std::int64_t ell3);
BoundValue bipartite_orderstat_bound(int nbar, int side1, int side2, const WeightFunction& w, double l0,
                                     std::int64_t k, std::int64_t ell3);
BoundValue bipartite_orderstat_bound(const GraphModel& g, const WeightFunction& w, double l0, std::int64_t k,
                                     std::int64_t ell3);
// variant under sup_i i/w(i+l0) < inf: constant / w(ell3 + l0)
BoundValue bipartite_bipbip_bound(const GraphModel& g, const WeightFunction& w, double l0, std::int64_t k,
                                  std::int64_t ell3);
BoundValue triangle_free_orderstat_bound(const GraphModel& g, const WeightFunction& w, double l0, std::int64_t k,
                                         std::int64_t ell3);

struct StuckProbability {
  long double p = 0;             // exponential form, the value used downstream
  long double product_form = 0;  // prod_{i>=1} (1 + x_i)^-2, always >= p
  long double series_upper = 0;  // certified upper bound of sum_{i>=1} 1/w(i + l0), worst entry
  long double sup_initial_weight = 0;
};

StuckProbability stuck_probability_p(int degree, const WeightAssignment& wa);

long double escape_bound(std::int64_t n, long double p);

struct PermutedOptions {
  WalkKind kind = WalkKind::edge;
  bool aggregate = true;          // multiply by |V| (ERRW) or nbar (VRRW)
  std::int64_t num_vertices = 0;  // ERRW aggregate factor
  std::size_t root_index = 0;     // VRRW: position of v0 in the element list
};

BoundValue permuted_orderstat_bound(const WeightFunction& w, const std::vector<double>& l0s,
                                    const std::vector<std::int64_t>& ells, const PermutedOptions& opt);

}  // namespace rrw
