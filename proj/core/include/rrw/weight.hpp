#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rrw/graph.hpp"
#include "rrw/rational.hpp"

namespace rrw {

enum class WeightFamily { power, power_log, exponential, osc_power, osc_exp, table };

// w(x) = scale * f(x + offset). Oscillating families and tables are defined on integers only.
class WeightFunction {
 public:
  static WeightFunction power(double rho, double offset = 0);
  static WeightFunction power_log(double rho, double beta, double offset = 0);
  static WeightFunction exponential(double lambda, double offset = 0);
  static WeightFunction osc_power(double rho);
  static WeightFunction osc_exp();
  // values[i] = w(i) as decimal or a/b strings; tail takes over from i = values.size()
  static WeightFunction table(const std::vector<std::string>& values,
                              std::optional<WeightFunction> tail = std::nullopt);

  // power:2  spow:1  powerlog:1.5:2  exp:0.5  oscpow:1  oscexp  table:1,2,4;power:2
  // an "@o" suffix sets the offset, e.g. power:2@1
  static WeightFunction parse(std::string_view spec);

  WeightFunction scaled(const Rational& factor) const;

  double operator()(double x) const;
  long double value_ld(double x) const;
  long double log_value(double x) const;
  std::optional<Rational> exact(double x) const;
  // appends w(x0 + i) and log w(x0 + i) for i < n; values whose log exceeds log_cap are stored as +inf
  void tabulate(double x0, std::size_t n, double log_cap, std::vector<double>& values,
                std::vector<double>& logs) const;

  WeightFamily family() const { return family_; }
  double rho() const { return rho_; }
  double beta() const { return beta_; }
  double lambda() const { return lambda_; }
  double offset() const { return offset_; }
  const Rational& scale() const { return scale_; }
  bool integer_domain() const;
  const std::vector<Rational>& table_values() const { return table_; }
  const WeightFunction* tail() const { return tail_.get(); }

  std::string spec() const;

 private:
  WeightFunction() = default;
  long double raw_log(long double y) const;
  void check_domain(double x) const;

  WeightFamily family_ = WeightFamily::power;
  double rho_ = 0, beta_ = 0, lambda_ = 0, offset_ = 0;
  Rational scale_ = 1;
  long double log_scale_ = 0;
  std::vector<Rational> table_;
  std::vector<long double> table_ld_;
  std::shared_ptr<const WeightFunction> tail_;
};

struct SummabilityClass {
  bool classifiable = true;
  bool azero_nat = false;  // sum 1/w(i) finite
  bool supinfv1 = false;   // sum i^(1/2)/w(i+l0) finite
  bool supinfv = false;    // sum i/w(i+l0) finite
  bool bipbip = false;     // sup i/w(i+l0) finite
  std::string regime;      // "natural" when l0 is an integer, "real" otherwise
  std::string note;
};

SummabilityClass classify(const WeightFunction& w, double l0);

// whether sum_i i^alpha / w(i+b) converges, from the family's asymptotics
bool series_converges(const WeightFunction& w, double alpha);

struct WeightEntry {
  WeightFunction w;
  double l0 = 1;
};

// per edge or per vertex weight function and initial weight, with a shared default
class WeightAssignment {
 public:
  WeightAssignment(WeightFunction w, double l0);

  void set_edge(EdgeId e, WeightFunction w, double l0);
  void set_vertex(VertexId v, WeightFunction w, double l0);

  const WeightEntry& for_edge(EdgeId e) const;
  const WeightEntry& for_vertex(VertexId v) const;
  const WeightEntry& default_entry() const { return default_; }
  bool uniform() const { return edges_.empty() && vertices_.empty(); }

  // all distinct entries including the default
  std::vector<const WeightEntry*> entries() const;
  // max over assigned elements of w(l0)
  long double sup_initial_weight() const;

 private:
  WeightEntry default_;
  std::map<EdgeId, WeightEntry> edges_;
  std::map<VertexId, WeightEntry> vertices_;
};

}  // namespace rrw
