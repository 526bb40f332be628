#include "rrw/rubin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rrw/error.hpp"
#include "rrw/seed.hpp"
#include "rrw/series.hpp"
#include "rrw/walk.hpp"

namespace rrw {

double unit_exponential(std::mt19937_64& rng) {
  // 1 - u lies in (0, 1]
  return -std::log1p(-uniform01(rng));
}

ClockStream::ClockStream(const WeightFunction& w, double base, double stride) : w_(w), base_(base), stride_(stride) {
  if (!(stride > 0)) throw Error("clock stride must be positive");
}

long double ClockStream::next(std::mt19937_64& rng) {
  long double e = unit_exponential(rng);
  time_ += e * std::exp(-w_.log_value(base_ + stride_ * static_cast<double>(index_)));
  ++index_;
  return time_;
}

void embedded_step(WalkState& state) {
  const auto& lw = state.competitor_log_weights();
  std::size_t best = 0;
  long double best_t = std::numeric_limits<long double>::infinity();
  auto& rng = state.rng();
  for (std::size_t j = 0; j < lw.size(); ++j) {
    // log of E_j / w_j
    long double t = std::log(static_cast<long double>(unit_exponential(rng))) - lw[j];
    if (t < best_t) {
      best_t = t;
      best = j;
    }
  }
  state.move_to_neighbor(best);
}

StarStuckEstimate star_stuck_probability(const GraphModel& star, const WeightFunction& w, double l0,
                                         std::int64_t replicas, std::uint64_t seed, double eps) {
  if (!star.is_finite()) throw Error("star sampler needs a finite star graph");
  auto cls = classify(w, l0);
  if (!cls.classifiable || !cls.azero_nat)
    throw DivergenceError("star sampler needs sum 1/w < inf; " + w.spec() + " does not qualify");
  auto centre = star.root();
  auto leaves = star.neighbors(centre);
  for (auto v : leaves)
    if (star.neighbors(v) != std::vector<VertexId>{centre})
      throw Error("star sampler needs a star rooted at its centre");
  if (replicas < 0) throw Error("replica count must be non-negative");

  StarStuckEstimate out;
  out.replicas = replicas;
  out.leaves = static_cast<std::int64_t>(leaves.size());
  out.attractor_counts.assign(leaves.size(), 0);

  // The clocks beyond index J of one edge have total mean at most U(J) = sum_{i>=2J} 1/w(l0+i). By
  // Markov, a comparison with margin d is wrong with probability at most U(J)/d, so J doubles per
  // replica until U(J) < eps * d for the margins that decide the verdict.
  auto tail_at = [&](std::int64_t J) { return tail_interval(w, 0, l0, 2 * J).hi; };
  constexpr std::int64_t kMaxClocks = std::int64_t{1} << 22;
  constexpr std::int64_t kMinClocks = 64;

  std::int64_t exists = 0, stuck = 0;
  long double time_sum = 0;
  const std::size_t n = leaves.size();
  struct Edge {
    std::mt19937_64 rng;
    long double t = 0;
    long double second = 0;
    std::int64_t j = 0;
  };
  std::vector<Edge> edges(n);
  std::vector<long double> inv;
  auto advance = [&](Edge& e, std::int64_t J) {
    while (static_cast<std::int64_t>(inv.size()) < J)
      inv.push_back(std::exp(-w.log_value(l0 + 2.0 * static_cast<double>(inv.size()))));
    for (; e.j < J; ++e.j) {
      e.t += unit_exponential(e.rng) * inv[static_cast<std::size_t>(e.j)];
      if (e.j == 1) e.second = e.t;
    }
  };
  for (std::int64_t r = 0; r < replicas; ++r) {
    auto rs = derive_seed(seed, static_cast<std::uint64_t>(r));
    for (std::size_t e = 0; e < n; ++e) edges[e] = Edge{std::mt19937_64(derive_seed(rs, e)), 0, 0, 0};
    std::int64_t J = kMinClocks;
    bool resolved = false, stuck_here = false;
    std::size_t best = 0;
    while (true) {
      for (auto& e : edges) advance(e, J);
      const long double u = tail_at(J);
      best = 0;
      for (std::size_t e = 1; e < n; ++e)
        if (edges[e].t < edges[best].t) best = e;
      long double gap = std::numeric_limits<long double>::infinity();
      long double rival_second = std::numeric_limits<long double>::infinity();
      for (std::size_t e = 0; e < n; ++e) {
        if (e == best) continue;
        gap = std::min(gap, edges[e].t - edges[best].t);
        rival_second = std::min(rival_second, edges[e].second);
      }
      bool order_ok = u < eps * gap;
      // past the rival's second alarm already, or clear of it by the margin
      bool stuck_ok = edges[best].t > rival_second || u < eps * (rival_second - edges[best].t);
      if ((order_ok && stuck_ok) || J >= kMaxClocks) {
        resolved = order_ok && stuck_ok;
        stuck_here = edges[best].t < rival_second;
        break;
      }
      J *= 2;
    }
    out.clocks_per_edge = std::max(out.clocks_per_edge, J);
    out.tail_bound = std::max(out.tail_bound, static_cast<double>(tail_at(J)));
    for (auto& e : edges) time_sum += e.t + tail_at(J) / 2;
    if (!resolved) {
      ++out.ambiguous;
      continue;
    }
    ++exists;
    ++out.attractor_counts[best];
    if (stuck_here) ++stuck;
  }
  out.attractor_exists = binomial_ci(exists, replicas);
  out.stuck_before_second_rival_alarm = binomial_ci(stuck, replicas);
  if (replicas > 0) out.mean_total_time = static_cast<double>(time_sum / (static_cast<long double>(replicas) * n));
  return out;
}

}  // namespace rrw
