#include "rrw/weight.hpp"

#include <cfloat>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rrw/error.hpp"

namespace rrw {

namespace {

double parse_double(std::string_view s, std::string_view what) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v))
    throw Error("weight spec: bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

std::string fmt(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

Rational parse_rational(std::string_view s) {
  if (s.empty()) throw Error("empty table entry");
  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    Rational q(BigInt(std::string(s.substr(0, slash))), BigInt(std::string(s.substr(slash + 1))));
    q.canonicalize();
    return q;
  }
  if (s.find_first_of("eE") != std::string_view::npos) return Rational(parse_double(s, "table entry"));
  std::string digits;
  int decimals = -1;
  for (char c : s) {
    if (c == '.') {
      if (decimals >= 0) throw Error("bad table entry '" + std::string(s) + "'");
      decimals = 0;
      continue;
    }
    if (!(std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && digits.empty())))
      throw Error("bad table entry '" + std::string(s) + "'");
    digits += c;
    if (decimals >= 0 && c != '-') ++decimals;
  }
  BigInt num(digits);
  BigInt den = 1;
  for (int i = 0; i < std::max(decimals, 0); ++i) den *= 10;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

bool is_integer(double x) { return std::floor(x) == x; }

// exact (num/den)^e for a non-negative integer e
Rational rational_pow(const Rational& q, unsigned long e) {
  BigInt n, d;
  mpz_pow_ui(n.get_mpz_t(), q.get_num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), q.get_den().get_mpz_t(), e);
  return make_rational(n, d);
}

struct Asymptotic {
  bool exponential = false;  // w grows at least geometrically
  bool bounded = false;      // w bounded or decaying
  double rho = 0;
  double beta = 0;
};

Asymptotic asymptotic(const WeightFunction& w) {
  switch (w.family()) {
    case WeightFamily::power: return {false, w.rho() <= 0, w.rho(), 0};
    case WeightFamily::power_log: return {false, w.rho() < 0 || (w.rho() == 0 && w.beta() <= 0), w.rho(), w.beta()};
    case WeightFamily::exponential: return {w.lambda() > 0, w.lambda() <= 0, 0, 0};
    case WeightFamily::osc_power: return {false, 1 + w.rho() <= 0, 1 + w.rho(), 0};
    case WeightFamily::osc_exp: return {true, false, 0, 0};
    case WeightFamily::table:
      if (!w.tail()) throw Error("table weight has no declared tail");
      return asymptotic(*w.tail());
  }
  return {};
}

}  // namespace

WeightFunction WeightFunction::power(double rho, double offset) {
  if (!std::isfinite(rho) || !std::isfinite(offset) || offset < 0) throw Error("power weight: bad parameters");
  WeightFunction w;
  w.family_ = WeightFamily::power;
  w.rho_ = rho;
  w.offset_ = offset;
  return w;
}

WeightFunction WeightFunction::power_log(double rho, double beta, double offset) {
  if (!std::isfinite(rho) || !std::isfinite(beta) || !std::isfinite(offset) || offset < 0)
    throw Error("powerlog weight: bad parameters");
  WeightFunction w;
  w.family_ = WeightFamily::power_log;
  w.rho_ = rho;
  w.beta_ = beta;
  w.offset_ = offset;
  return w;
}

WeightFunction WeightFunction::exponential(double lambda, double offset) {
  if (!std::isfinite(lambda) || !std::isfinite(offset) || offset < 0) throw Error("exp weight: bad parameters");
  WeightFunction w;
  w.family_ = WeightFamily::exponential;
  w.lambda_ = lambda;
  w.offset_ = offset;
  return w;
}

WeightFunction WeightFunction::osc_power(double rho) {
  if (!std::isfinite(rho)) throw Error("oscpow weight: bad parameter");
  WeightFunction w;
  w.family_ = WeightFamily::osc_power;
  w.rho_ = rho;
  return w;
}

WeightFunction WeightFunction::osc_exp() {
  WeightFunction w;
  w.family_ = WeightFamily::osc_exp;
  return w;
}

WeightFunction WeightFunction::table(const std::vector<std::string>& values, std::optional<WeightFunction> tail) {
  if (values.empty()) throw Error("table weight needs at least one value");
  WeightFunction w;
  w.family_ = WeightFamily::table;
  for (auto& s : values) {
    Rational q = parse_rational(s);
    if (q <= 0) throw Error("table weight values must be positive");
    w.table_.push_back(q);
    w.table_ld_.push_back(to_long_double(q));
  }
  if (tail) {
    if (tail->family() == WeightFamily::table) throw Error("table tail cannot itself be a table");
    w.tail_ = std::make_shared<const WeightFunction>(*tail);
  }
  return w;
}

WeightFunction WeightFunction::parse(std::string_view spec) {
  std::string_view body = spec;
  double offset = 0;
  bool has_offset = false;
  if (auto at = spec.find('@'); at != std::string_view::npos && spec.substr(0, 6) != "table:") {
    offset = parse_double(spec.substr(at + 1), "offset");
    body = spec.substr(0, at);
    has_offset = true;
  }
  std::vector<std::string_view> parts;
  for (std::size_t start = 0;;) {
    auto pos = body.find(':', start);
    parts.push_back(body.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
    if (parts.size() == 1 && parts[0] == "table") {
      parts.push_back(body.substr(start));
      break;
    }
  }
  auto name = parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() != n + 1)
      throw Error("weight spec '" + std::string(spec) + "': family '" + std::string(name) + "' takes " +
                  std::to_string(n) + " parameter(s)");
  };
  if (name == "power") {
    need(1);
    return power(parse_double(parts[1], "exponent"), offset);
  }
  if (name == "spow") {
    need(1);
    return power(parse_double(parts[1], "exponent"), has_offset ? offset : 1.0);
  }
  if (name == "powerlog") {
    need(2);
    return power_log(parse_double(parts[1], "exponent"), parse_double(parts[2], "log exponent"), offset);
  }
  if (name == "exp") {
    need(1);
    return exponential(parse_double(parts[1], "rate"), offset);
  }
  if (name == "oscpow") {
    need(1);
    if (has_offset) throw Error("oscpow takes no offset");
    return osc_power(parse_double(parts[1], "exponent"));
  }
  if (name == "oscexp") {
    need(0);
    if (has_offset) throw Error("oscexp takes no offset");
    return osc_exp();
  }
  if (name == "table") {
    need(1);
    std::string_view rest = parts[1];
    std::optional<WeightFunction> tail;
    if (auto semi = rest.find(';'); semi != std::string_view::npos) {
      tail = parse(rest.substr(semi + 1));
      rest = rest.substr(0, semi);
    }
    std::vector<std::string> vals;
    for (std::size_t start = 0;;) {
      auto pos = rest.find(',', start);
      vals.emplace_back(rest.substr(start, pos == std::string_view::npos ? pos : pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return table(vals, tail);
  }
  throw Error("unknown weight family '" + std::string(name) + "'");
}

WeightFunction WeightFunction::scaled(const Rational& factor) const {
  if (factor <= 0) throw Error("weight scale must be positive");
  WeightFunction w = *this;
  w.scale_ = scale_ * factor;
  w.log_scale_ = std::log(to_long_double(w.scale_));
  return w;
}

bool WeightFunction::integer_domain() const {
  return family_ == WeightFamily::osc_power || family_ == WeightFamily::osc_exp || family_ == WeightFamily::table;
}

void WeightFunction::check_domain(double x) const {
  if (!(x >= 0) || !std::isfinite(x)) throw Error("weight evaluated at invalid argument " + fmt(x));
  if (integer_domain() && !is_integer(x))
    throw Error("weight " + spec() + " is defined on integers only, got " + fmt(x));
}

long double WeightFunction::raw_log(long double y) const {
  switch (family_) {
    case WeightFamily::power: return rho_ == 0 ? 0.0L : rho_ * std::log(y);
    case WeightFamily::power_log: return rho_ * std::log(y) + beta_ * std::log(std::log1p(y));
    case WeightFamily::exponential: return lambda_ * y;
    case WeightFamily::osc_power: {
      long double k = y;
      bool even = std::fmod(k, 2.0L) == 0;
      return (1 + rho_) * std::log(k) - std::log(even ? 3.0L : 1.0L);
    }
    case WeightFamily::osc_exp: {
      bool even = std::fmod(y, 2.0L) == 0;
      return y * (even ? 3 : 1);
    }
    case WeightFamily::table: {
      auto k = static_cast<std::size_t>(y);
      if (k < table_ld_.size()) return std::log(table_ld_[k]);
      if (!tail_) throw Error("table weight has no value at " + std::to_string(k));
      return tail_->log_value(static_cast<double>(y));
    }
  }
  return 0;
}

long double WeightFunction::log_value(double x) const {
  check_domain(x);
  long double y = static_cast<long double>(x) + offset_;
  long double v = raw_log(y) + log_scale_;
  if (std::isnan(v) || v == -INFINITY) throw Error("weight " + spec() + " is not positive at " + fmt(x));
  return v;
}

long double WeightFunction::value_ld(double x) const {
  check_domain(x);
  long double y = static_cast<long double>(x) + offset_;
  long double v = 0;
  switch (family_) {
    case WeightFamily::power: v = rho_ == 0 ? 1.0L : std::pow(y, static_cast<long double>(rho_)); break;
    case WeightFamily::power_log:
      v = std::pow(y, static_cast<long double>(rho_)) * std::pow(std::log1p(y), static_cast<long double>(beta_));
      break;
    case WeightFamily::exponential: v = std::exp(lambda_ * y); break;
    case WeightFamily::osc_power: {
      bool even = std::fmod(y, 2.0L) == 0;
      v = std::pow(y, 1.0L + rho_) / (even ? 3.0L : 1.0L);
      break;
    }
    case WeightFamily::osc_exp: {
      bool even = std::fmod(y, 2.0L) == 0;
      v = std::exp(y * (even ? 3 : 1));
      break;
    }
    case WeightFamily::table: {
      auto k = static_cast<std::size_t>(y);
      if (k < table_ld_.size()) {
        v = table_ld_[k];
      } else {
        if (!tail_) throw Error("table weight has no value at " + std::to_string(k));
        v = tail_->value_ld(x);
      }
      break;
    }
  }
  if (scale_ != 1) v *= to_long_double(scale_);
  if (std::isnan(v) || !(v > 0)) throw Error("weight " + spec() + " is not positive at " + fmt(x));
  return v;
}

void WeightFunction::tabulate(double x0, std::size_t n, double log_cap, std::vector<double>& values,
                              std::vector<double>& logs) const {
  if (n == 0) return;
  check_domain(x0);
  const double y0 = x0 + offset_;
  const bool fast = log_scale_ == 0 && y0 > 0 &&
                    (family_ == WeightFamily::power || family_ == WeightFamily::power_log ||
                     family_ == WeightFamily::exponential);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x0 + static_cast<double>(i);
    double lv, v;
    if (fast) {
      const double y = y0 + static_cast<double>(i);
      switch (family_) {
        case WeightFamily::power:
          lv = rho_ == 0 ? 0.0 : rho_ * std::log(y);
          v = rho_ == 0 ? 1.0 : std::pow(y, rho_);
          break;
        case WeightFamily::power_log: {
          double l = std::log1p(y);
          lv = rho_ * std::log(y) + beta_ * std::log(l);
          v = std::pow(y, rho_) * std::pow(l, beta_);
          break;
        }
        default:
          lv = lambda_ * y;
          v = std::exp(lv);
      }
    } else {
      lv = static_cast<double>(log_value(x));
      v = lv > log_cap ? 0.0 : static_cast<double>(value_ld(x));
    }
    logs.push_back(lv);
    values.push_back(lv > log_cap ? std::numeric_limits<double>::infinity() : v);
  }
}

double WeightFunction::operator()(double x) const {
  long double v = value_ld(x);
  if (!(v <= DBL_MAX))
    throw OverflowError("weight " + spec() + " overflows at " + fmt(x) + " (log w = " +
                        std::to_string(static_cast<double>(log_value(x))) + "); use log-space weights");
  return static_cast<double>(v);
}

std::optional<Rational> WeightFunction::exact(double x) const {
  check_domain(x);
  Rational y = Rational(x) + Rational(offset_);
  std::optional<Rational> v;
  switch (family_) {
    case WeightFamily::power:
      if (rho_ >= 0 && is_integer(rho_) && rho_ <= 64) v = rational_pow(y, static_cast<unsigned long>(rho_));
      break;
    case WeightFamily::power_log:
      if (beta_ == 0 && rho_ >= 0 && is_integer(rho_) && rho_ <= 64)
        v = rational_pow(y, static_cast<unsigned long>(rho_));
      break;
    case WeightFamily::exponential:
      if (lambda_ == 0 || y == 0) v = Rational(1);
      break;
    case WeightFamily::osc_power:
      if (rho_ >= -1 && is_integer(rho_) && rho_ <= 63) {
        bool even = std::fmod(x, 2.0) == 0;
        v = rational_pow(y, static_cast<unsigned long>(1 + rho_)) / Rational(even ? 3 : 1);
      }
      break;
    case WeightFamily::osc_exp:
      if (y == 0) v = Rational(1);
      break;
    case WeightFamily::table: {
      auto k = static_cast<std::size_t>(x);
      if (k < table_.size()) v = table_[k];
      else if (tail_) v = tail_->exact(x);
      break;
    }
  }
  if (v) {
    *v *= scale_;
    if (*v <= 0) throw Error("weight " + spec() + " is not positive at " + fmt(x));
  }
  return v;
}

std::string WeightFunction::spec() const {
  std::string s;
  switch (family_) {
    case WeightFamily::power: s = "power:" + fmt(rho_); break;
    case WeightFamily::power_log: s = "powerlog:" + fmt(rho_) + ":" + fmt(beta_); break;
    case WeightFamily::exponential: s = "exp:" + fmt(lambda_); break;
    case WeightFamily::osc_power: s = "oscpow:" + fmt(rho_); break;
    case WeightFamily::osc_exp: s = "oscexp"; break;
    case WeightFamily::table: {
      s = "table:";
      for (std::size_t i = 0; i < table_.size(); ++i) s += (i ? "," : "") + table_[i].get_str();
      if (tail_) s += ";" + tail_->spec();
      break;
    }
  }
  if (offset_ != 0) s += "@" + fmt(offset_);
  if (scale_ != 1) s += "*" + scale_.get_str();
  return s;
}

bool series_converges(const WeightFunction& w, double alpha) {
  auto a = asymptotic(w);
  if (a.exponential) return true;
  if (a.bounded) return false;
  double gap = a.rho - alpha;
  return gap > 1 || (gap == 1 && a.beta > 1);
}

SummabilityClass classify(const WeightFunction& w, double l0) {
  SummabilityClass c;
  c.regime = is_integer(l0) ? "natural" : "real";
  if (w.family() == WeightFamily::table && !w.tail()) {
    c.classifiable = false;
    c.note = "table without a declared tail bound";
    return c;
  }
  if (l0 < 0) throw Error("initial weight must be non-negative");
  // positivity at the first argument the walk uses
  w.log_value(l0);
  c.azero_nat = series_converges(w, 0);
  c.supinfv1 = series_converges(w, 0.5);
  c.supinfv = series_converges(w, 1);
  auto a = asymptotic(w);
  c.bipbip = a.exponential || (!a.bounded && (a.rho > 1 || (a.rho == 1 && a.beta >= 0)));
  if ((c.supinfv && !c.supinfv1) || (c.supinfv1 && !c.azero_nat) || (c.supinfv && !c.bipbip))
    throw std::logic_error("summability implication chain broken for " + w.spec());
  return c;
}

WeightAssignment::WeightAssignment(WeightFunction w, double l0) : default_{std::move(w), l0} {
  if (!(l0 >= 0)) throw Error("initial weight must be non-negative");
}

void WeightAssignment::set_edge(EdgeId e, WeightFunction w, double l0) {
  if (!(l0 >= 0)) throw Error("initial weight must be non-negative");
  edges_.insert_or_assign(e, WeightEntry{std::move(w), l0});
}

void WeightAssignment::set_vertex(VertexId v, WeightFunction w, double l0) {
  if (!(l0 >= 0)) throw Error("initial weight must be non-negative");
  vertices_.insert_or_assign(v, WeightEntry{std::move(w), l0});
}

const WeightEntry& WeightAssignment::for_edge(EdgeId e) const {
  auto it = edges_.find(e);
  return it == edges_.end() ? default_ : it->second;
}

const WeightEntry& WeightAssignment::for_vertex(VertexId v) const {
  auto it = vertices_.find(v);
  return it == vertices_.end() ? default_ : it->second;
}

std::vector<const WeightEntry*> WeightAssignment::entries() const {
  std::vector<const WeightEntry*> out{&default_};
  for (auto& [k, v] : edges_) out.push_back(&v);
  for (auto& [k, v] : vertices_) out.push_back(&v);
  return out;
}

long double WeightAssignment::sup_initial_weight() const {
  long double m = 0;
  for (auto* e : entries()) m = std::max(m, e->w.value_ld(e->l0));
  return m;
}

}  // namespace rrw
