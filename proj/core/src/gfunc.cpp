#include "rrw/gfunc.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rrw/error.hpp"

namespace rrw {

namespace {

constexpr long double kExactLimit = 0x1.0p62L;

long double pow_base(int base, int m) { return std::pow(static_cast<long double>(base), static_cast<long double>(m)); }

// index search on the exact range; tail_below must be monotone in n
template <class Below>
BigIndex search_exact(Below below, long double guess) {
  std::uint64_t lo = 1;
  if (below(lo)) return BigIndex::of(lo);
  std::uint64_t hi = guess >= 2 && guess < kExactLimit ? static_cast<std::uint64_t>(guess) : 2;
  while (!below(hi)) {
    lo = hi;
    if (hi >= (std::uint64_t{1} << 62)) throw Error("index search left the exact range");
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    (below(mid) ? hi : lo) = mid;
  }
  return BigIndex::of(hi);
}

class Geometric final : public PSequence {
 public:
  Geometric(long double q, long double coef) : q_(q), coef_(coef) {
    if (!(q > 0 && q < 1) || !(coef > 0)) throw Error("geometric sequence needs 0 < q < 1 and coef > 0");
  }
  std::string name() const override {
    std::ostringstream os;
    os << "geometric(q=" << static_cast<double>(q_) << ", c=" << static_cast<double>(coef_) << ")";
    return os.str();
  }
  long double p(std::uint64_t l) const override { return coef_ * std::pow(q_, static_cast<long double>(l)); }
  long double log2_tail_upper(const BigIndex& n) const override {
    // sum_{i>=n} c q^i = c q^n / (1 - q)
    long double nn = n.exact ? static_cast<long double>(n.n) : std::exp2(n.log2n);
    return std::log2(coef_) + nn * std::log2(q_) - std::log2(1 - q_);
  }
  BigIndex first_index_with_tail_below(long double t) const override {
    long double x = (-t - std::log2(coef_) + std::log2(1 - q_)) / std::log2(q_);
    if (x + 2 >= kExactLimit) return BigIndex::from_log2(std::log2(x + 1));
    auto below = [&](std::uint64_t n) { return log2_tail_upper(BigIndex::of(n)) < -t; };
    return search_exact(below, x + 1);
  }

 private:
  long double q_, coef_;
};

class Power final : public PSequence {
 public:
  Power(long double rho, long double shift, long double coef) : rho_(rho), shift_(shift), coef_(coef) {
    if (!(rho > 1) || !(shift > -1) || !(coef > 0)) throw Error("power sequence needs rho > 1, shift > -1, coef > 0");
  }
  std::string name() const override {
    std::ostringstream os;
    os << "power(rho=" << static_cast<double>(rho_) << ", shift=" << static_cast<double>(shift_)
       << ", c=" << static_cast<double>(coef_) << ")";
    return os.str();
  }
  long double p(std::uint64_t l) const override {
    return coef_ * std::pow(static_cast<long double>(l) + shift_, -rho_);
  }
  long double log2_tail_upper(const BigIndex& n) const override {
    // sum_{i>=n} (i+s)^-rho <= (n+s)^-rho + (n+s)^(1-rho)/(rho-1)
    long double lg;
    if (n.exact) {
      long double x = static_cast<long double>(n.n) + shift_;
      return std::log2(coef_ * (std::pow(x, -rho_) + std::pow(x, 1 - rho_) / (rho_ - 1)));
    }
    // n + s >= n, and the first term is at most the second times (rho - 1) / (n + s)
    lg = n.log2n;
    return std::log2(coef_) + (1 - rho_) * lg + std::log2((1 + (rho_ - 1) * std::exp2(-lg)) / (rho_ - 1));
  }
  BigIndex first_index_with_tail_below(long double t) const override {
    // (n+s)^(1-rho) rho/(rho-1) c < 2^-t is sufficient
    long double x = (t + std::log2(coef_ * rho_ / (rho_ - 1))) / (rho_ - 1);
    if (x >= 61) return BigIndex::from_log2(x);
    auto below = [&](std::uint64_t n) { return log2_tail_upper(BigIndex::of(n)) < -t; };
    return search_exact(below, std::exp2(x));
  }

 private:
  long double rho_, shift_, coef_;
};

}  // namespace

BigIndex BigIndex::of(std::uint64_t v) {
  BigIndex b;
  b.n = v;
  b.log2n = std::log2(static_cast<long double>(v));
  return b;
}

BigIndex BigIndex::from_log2(long double lg) {
  BigIndex b;
  b.exact = false;
  b.log2n = lg;
  return b;
}

long double BigIndex::log2() const { return log2n; }

std::string BigIndex::str() const {
  if (exact) return std::to_string(n);
  std::ostringstream os;
  os << "2^" << static_cast<double>(log2n);
  return os.str();
}

bool operator<(const BigIndex& a, const BigIndex& b) {
  if (a.exact && b.exact) return a.n < b.n;
  return a.log2n < b.log2n;
}

bool operator<=(const BigIndex& a, const BigIndex& b) { return !(b < a); }

BigIndex PSequence::first_index_with_tail_below(long double t) const {
  auto below = [&](std::uint64_t n) { return log2_tail_upper(BigIndex::of(n)) < -t; };
  return search_exact(below, 2);
}

std::shared_ptr<const PSequence> geometric_sequence(long double q, long double coef) {
  return std::make_shared<Geometric>(q, coef);
}

std::shared_ptr<const PSequence> power_sequence(long double rho, long double shift, long double coef) {
  return std::make_shared<Power>(rho, shift, coef);
}

std::shared_ptr<const PSequence> weight_sequence(const WeightFunction& w, double b) {
  long double inv_scale = 1 / to_long_double(w.scale());
  switch (w.family()) {
    case WeightFamily::power:
      if (!(w.rho() > 1)) throw DivergenceError("sum of 1/w diverges for " + w.spec());
      return power_sequence(w.rho(), b + w.offset(), inv_scale);
    case WeightFamily::exponential:
      if (!(w.lambda() > 0)) throw DivergenceError("sum of 1/w diverges for " + w.spec());
      return geometric_sequence(std::exp(-static_cast<long double>(w.lambda())),
                                inv_scale * std::exp(-static_cast<long double>(w.lambda()) * (b + w.offset())));
    default:
      throw Error("no certified tail for the index construction with " + w.spec());
  }
}

GFunction::GFunction(std::shared_ptr<const PSequence> p, int base, int blocks) : p_(std::move(p)), base_(base) {
  if (base < 2) throw Error("g-function base must be at least 2");
  if (blocks < 1 || pow_base(base, blocks + 1) > 0x1.0p4000L) throw Error("g-function block count out of range");
  for (int m = 0; m <= blocks; ++m) starts_.push_back(p_->first_index_with_tail_below(pow_base(base, m)));
  // M <= sum_l p_l + sum_{m>=1} 2^m tail(n_{N^m})
  long double mass = std::exp2(p_->log2_tail_upper(BigIndex::of(1)));
  for (int m = 1; m <= blocks; ++m) mass += std::exp2(m + p_->log2_tail_upper(starts_[static_cast<std::size_t>(m)]));
  // later blocks: 2^{m - N^m}, ratio below 1/2
  mass += 2 * std::exp2(static_cast<long double>(blocks + 1) - pow_base(base, blocks + 1));
  mass_ = mass * (1 + 1e-12L);
}

BigIndex GFunction::start(int m) const {
  while (static_cast<int>(starts_.size()) <= m) {
    long double t = pow_base(base_, static_cast<int>(starts_.size()));
    starts_.push_back(p_->first_index_with_tail_below(t));
  }
  return starts_[static_cast<std::size_t>(m)];
}

BigIndex GFunction::breakpoint(std::uint64_t l) const {
  return p_->first_index_with_tail_below(static_cast<long double>(l));
}

long double GFunction::value(std::uint64_t l) const { return value_at(BigIndex::of(l)); }

long double GFunction::value_at(const BigIndex& x) const {
  int m = 0;
  while (start(m + 1) <= x) ++m;
  return m == 0 ? 1.0L : std::exp2(static_cast<long double>(m));
}

BlockCheck GFunction::check_block(int m) const {
  if (m < 1) throw Error("blocks are numbered from 1");
  BlockCheck r;
  r.m = m;
  r.begin = start(m);
  r.end = start(m + 1);
  r.log2_target = m - pow_base(base_, m);
  r.log2_bound = m + p_->log2_tail_upper(r.begin);
  r.pass = r.log2_bound < r.log2_target;
  if (r.begin.exact && r.end.exact && r.end.n - r.begin.n <= 10'000'000) {
    r.explicit_sum = true;
    long double s = 0, comp = 0;
    for (std::uint64_t l = r.begin.n; l < r.end.n; ++l) {
      long double y = p_->p(l) - comp;
      long double t = s + y;
      comp = (t - s) - y;
      s = t;
    }
    r.sum = std::exp2(static_cast<long double>(m)) * s;
    r.pass = r.pass && r.sum < std::exp2(r.log2_target);
  }
  return r;
}

bool GFunction::monotone() const {
  for (std::size_t i = 1; i < starts_.size(); ++i)
    if (starts_[i] < starts_[i - 1]) return false;
  return true;
}

GFunction construct_g(std::shared_ptr<const PSequence> p, int base, int blocks) {
  return GFunction(std::move(p), base, blocks);
}

}  // namespace rrw
