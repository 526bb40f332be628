#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rrw/graph.hpp"
#include "rrw/stats.hpp"
#include "rrw/weight.hpp"

namespace rrw {

class WalkState;

// Alarm times of one element: the i-th alarm rings at sum_{j<=i} E_j / w(base + stride*j).
class ClockStream {
 public:
  ClockStream(const WeightFunction& w, double base, double stride = 1);

  // consume the next clock and return the new accumulated time
  long double next(std::mt19937_64& rng);
  long double time() const { return time_; }
  std::int64_t index() const { return index_; }

 private:
  WeightFunction w_;
  double base_;
  double stride_;
  long double time_ = 0;
  std::int64_t index_ = 0;
};

// unit exponential from one uniform
double unit_exponential(std::mt19937_64& rng);

// one step by an exponential race between the competitors at the current vertex
void embedded_step(WalkState& state);

struct StarStuckEstimate {
  std::int64_t replicas = 0;
  std::int64_t leaves = 0;
  std::int64_t clocks_per_edge = 0;   // largest number of explicit clocks used by a replica
  double tail_bound = 0;              // largest bound on the mean of the neglected clock time
  std::int64_t ambiguous = 0;         // replicas left unresolved at the clock cap
  std::vector<std::int64_t> attractor_counts;  // per leaf edge, leaves in id order
  ProportionCI attractor_exists;
  // one edge's whole clock sequence completes before any rival's second alarm
  ProportionCI stuck_before_second_rival_alarm;
  double mean_total_time = 0;         // averaged over edges and replicas
};

// ERRW started at the centre of a star: every excursion to a leaf traverses its edge twice, so the
// clocks of edge e have rates w(l0 + 2j). eps bounds the chance that truncating the clock sequences
// flips a replica's verdict.
StarStuckEstimate star_stuck_probability(const GraphModel& star, const WeightFunction& w, double l0,
                                         std::int64_t replicas, std::uint64_t seed, double eps = 1e-3);

}  // namespace rrw
