#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rrw/weight.hpp"

namespace rrw {

// A positive index that may be far beyond 2^64; huge indices are carried by log2 only.
struct BigIndex {
  bool exact = true;
  std::uint64_t n = 0;
  long double log2n = 0;

  static BigIndex of(std::uint64_t v);
  static BigIndex from_log2(long double lg);
  long double log2() const;
  std::string str() const;
};

bool operator<(const BigIndex& a, const BigIndex& b);
bool operator<=(const BigIndex& a, const BigIndex& b);

// summable positive sequence p_l, l >= 1, with a certified tail bound
class PSequence {
 public:
  virtual ~PSequence() = default;
  virtual std::string name() const = 0;
  virtual long double p(std::uint64_t l) const = 0;
  // log2 of an upper bound for sum_{i >= n} p_i
  virtual long double log2_tail_upper(const BigIndex& n) const = 0;
  // smallest n with log2_tail_upper(n) < -t
  virtual BigIndex first_index_with_tail_below(long double t) const;
};

// p_l = coef * q^l, 0 < q < 1
std::shared_ptr<const PSequence> geometric_sequence(long double q, long double coef = 1);
// p_l = coef * (l + shift)^-rho, rho > 1, shift > -1
std::shared_ptr<const PSequence> power_sequence(long double rho, long double shift = 0, long double coef = 1);
// p_l = 1 / w(l + b); power and exponential families only
std::shared_ptr<const PSequence> weight_sequence(const WeightFunction& w, double b);

struct BlockCheck {
  int m = 0;
  BigIndex begin;               // n_{N^m}
  BigIndex end;                 // n_{N^{m+1}}
  long double log2_bound = 0;   // log2 of 2^m * tail(n_{N^m})
  long double log2_target = 0;  // m - N^m
  bool explicit_sum = false;    // block summed term by term as well
  long double sum = 0;
  bool pass = false;
};

// g = 1 below n_N and 2^m on [n_{N^m}, n_{N^{m+1}})
class GFunction {
 public:
  GFunction(std::shared_ptr<const PSequence> p, int base, int blocks);

  int base() const { return base_; }
  const PSequence& sequence() const { return *p_; }
  // n_l for integer l >= 1
  BigIndex breakpoint(std::uint64_t l) const;
  // n_{N^m}, m = 0..blocks
  const std::vector<BigIndex>& block_starts() const { return starts_; }
  long double value(std::uint64_t l) const;
  long double value_at(const BigIndex& l) const;
  // certified upper bound of sum_l g(l) p_l
  long double mass_upper() const { return mass_; }
  BlockCheck check_block(int m) const;
  bool monotone() const;

 private:
  BigIndex start(int m) const;

  std::shared_ptr<const PSequence> p_;
  int base_;
  mutable std::vector<BigIndex> starts_;
  long double mass_ = 0;
};

GFunction construct_g(std::shared_ptr<const PSequence> p, int base = 2, int blocks = 24);

}  // namespace rrw
