#include "rrw_cli/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rrw/bounds.hpp"
#include "rrw/gfunc.hpp"
#include "rrw/harness.hpp"
#include "rrw/oracle.hpp"
#include "rrw/rubin.hpp"
#include "rrw/seed.hpp"
#include "rrw/stats.hpp"

namespace rrw::cli {

namespace {

constexpr std::size_t kMaxFailures = 40;

const std::vector<std::string> kJointGraphs = {"triangle", "path:4", "star:4", "cycle:4", "complete:4"};
const std::vector<std::string> kWeights = {"power:2", "power:3", "oscpow:1"};
constexpr int kMaxK = 8;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void fail(SuiteResult& r, const std::string& msg) {
  ++r.violations;
  if (r.failures.size() < kMaxFailures) r.failures.push_back(msg);
}

// every vector of n non-negative integers summing to k
void compositions(std::size_t n, std::int64_t k, const std::function<void(const std::vector<std::int64_t>&)>& f) {
  std::vector<std::int64_t> v(n, 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (i + 1 == n) {
      v[i] = left;
      f(v);
      return;
    }
    for (std::int64_t x = 0; x <= left; ++x) {
      v[i] = x;
      rec(i + 1, left - x);
    }
  };
  if (n == 0) return;
  rec(0, k);
}

std::string counts_str(const std::vector<std::int64_t>& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

}  // namespace

SuiteResult verify_joint_bounds(WalkKind kind) {
  Timer t;
  SuiteResult r;
  r.name = kind == WalkKind::edge ? "joint-bounds/edge" : "joint-bounds/vertex";
  std::int64_t reachable = 0;
  for (const auto& gs : kJointGraphs) {
    auto g = GraphModel::parse(gs);
    const auto edges = g.edges();
    const auto& verts = g.vertices();
    const std::size_t n = kind == WalkKind::edge ? edges.size() : verts.size();
    for (const auto& ws : kWeights) {
      WeightAssignment wa(WeightFunction::parse(ws), 1);
      for (int k = 0; k <= kMaxK; ++k) {
        std::map<std::pair<std::vector<std::int64_t>, std::size_t>, Rational> law;
        for_each_path<Rational>(g, kind, wa, k, [&](const OraclePath& p, const Rational& prob) {
          law[{p.counts, p.vertices.back()}] += prob;
        });
        compositions(n, k, [&](const std::vector<std::int64_t>& c) {
          for (std::size_t land = 0; land < verts.size(); ++land) {
            BoundValue b;
            if (kind == WalkKind::edge) {
              std::map<EdgeId, std::int64_t> m;
              for (std::size_t i = 0; i < n; ++i) m[edges[i]] = c[i];
              b = errw_joint_bound(g, wa, m, k, verts[land]);
            } else {
              std::map<VertexId, std::int64_t> m;
              for (std::size_t i = 0; i < n; ++i) m[verts[i]] = c[i];
              b = vrrw_joint_bound(g, wa, m, k, verts[land]);
            }
            auto it = law.find({c, land});
            Rational p = it == law.end() ? Rational(0) : it->second;
            ++r.checked;
            if (it != law.end()) ++reachable;
            if (!dominated(p, b))
              fail(r, gs + " w=" + ws + " k=" + std::to_string(k) + " counts=" + counts_str(c) +
                          " landing=" + g.format(verts[land]) + ": P=" + p.get_str() + " > bound " + b.str());
          }
        });
      }
    }
  }
  r.notes.push_back(std::to_string(reachable) + " configurations with positive probability");
  r.seconds = t.seconds();
  return r;
}

SuiteResult verify_orderstat_bounds() {
  Timer t;
  SuiteResult r;
  r.name = "orderstat-bounds";
  for (const std::string gs : {"triangle", "complete:4"}) {
    auto g = GraphModel::parse(gs);
    for (const auto& ws : kWeights) {
      auto w = WeightFunction::parse(ws);
      WeightAssignment wa(w, 1);
      for (auto kind : {WalkKind::edge, WalkKind::vertex}) {
        const std::size_t idx = kind == WalkKind::edge ? 2 : 3;
        double worst = 0;
        for (int k = 0; k <= kMaxK; ++k) {
          auto paths = enumerate_paths<Rational>(g, kind, wa, k);
          auto dist = exact_orderstat_distribution(paths, idx);
          const std::int64_t top = kind == WalkKind::edge ? k / 2 : k / 3;
          for (auto& [v, p] : dist)
            if (v > top) fail(r, gs + " " + to_string(kind) + " k=" + std::to_string(k) + ": order statistic " +
                                     std::to_string(v) + " above its admissible range");
          for (std::int64_t ell = 0; ell <= top; ++ell) {
            auto it = dist.find(ell);
            Rational p = it == dist.end() ? Rational(0) : it->second;
            BoundValue b = kind == WalkKind::edge
                               ? errw_orderstat_bound(static_cast<int>(g.num_edges()),
                                                      static_cast<std::int64_t>(g.num_vertices()), w, 1, k, ell)
                               : vrrw_orderstat_bound(static_cast<int>(g.num_vertices()), w, 1, k, ell);
            ++r.checked;
            if (!dominated(p, b))
              fail(r, gs + " " + to_string(kind) + " w=" + ws + " k=" + std::to_string(k) + " l=" +
                          std::to_string(ell) + ": P=" + p.get_str() + " > bound " + b.str());
            if (b.x > 0) worst = std::max(worst, p.get_d() / static_cast<double>(b.x));
          }
        }
        std::ostringstream os;
        os << gs << " " << to_string(kind) << " " << ws << ": max P/bound = " << worst;
        r.notes.push_back(os.str());
      }
    }
  }
  r.seconds = t.seconds();
  return r;
}

SuiteResult verify_qm() {
  Timer t;
  SuiteResult r;
  r.name = "qm";
  auto w = WeightFunction::parse("power:2");
  const double b = 1;
  for (int m = 1; m <= 4; ++m) {
    for (std::int64_t a = 0; a <= 20; ++a) {
      for (std::int64_t c = 0; c <= 20; ++c) {
        auto dp = q_m(m, a, b, c, w);
        auto en = q_m_enumerate(m, a, b, c, w);
        ++r.checked;
        if (!dp.exact || !en.exact || dp.q != en.q)
          fail(r, "Q_" + std::to_string(m) + "(" + std::to_string(a) + "; 1; " + std::to_string(c) +
                      "): DP " + dp.str() + " != enumeration " + en.str());
      }
      for (std::int64_t c = 0; c <= 21; ++c) {
        // c = 21 stands for no cap
        auto cap = c <= 20 ? std::optional<std::int64_t>(c) : std::nullopt;
        auto chk = c_bound_check(m, a, 20, b, w, cap);
        ++r.checked;
        if (!chk.pass)
          fail(r, "c-bound m=" + std::to_string(m) + " a=" + std::to_string(a) + " c=" +
                      (cap ? std::to_string(*cap) : std::string("inf")) + ": " + chk.lhs.str() + " > " +
                      std::to_string(static_cast<double>(chk.rhs_lower)));
      }
    }
  }
  r.seconds = t.seconds();
  return r;
}

SuiteResult verify_g_function() {
  Timer t;
  SuiteResult r;
  r.name = "g-function";
  struct Case {
    std::string label;
    std::shared_ptr<const PSequence> p;
  };
  std::vector<Case> cases = {
      {"2^-l", geometric_sequence(0.5L)},
      {"l^-2", power_sequence(2)},
      {"1/w(l+1), w=power:2", weight_sequence(WeightFunction::parse("power:2"), 1)},
  };
  for (std::uint64_t l = 1; l <= 64; ++l) {
    ++r.checked;
    auto n = cases[0].p->first_index_with_tail_below(static_cast<long double>(l));
    if (!n.exact || n.n != l + 2) fail(r, "2^-l: n_" + std::to_string(l) + " = " + n.str() + ", expected l + 2");
  }
  for (const auto& c : cases) {
    auto g = construct_g(c.p, 2, 24);
    ++r.checked;
    if (!g.monotone()) fail(r, c.label + ": block starts not monotone");
    ++r.checked;
    // g(n_{N^m}) = 2^m, so block 20 already exceeds 10^6
    const auto& starts = g.block_starts();
    long double top = g.value_at(starts[20]);
    if (!(top > 1e6L)) fail(r, c.label + ": g stays below 10^6 through block 20");
    ++r.checked;
    if (!std::isfinite(static_cast<double>(g.mass_upper()))) fail(r, c.label + ": mass bound is not finite");
    for (int m = 1; m <= 10; ++m) {
      auto bc = g.check_block(m);
      ++r.checked;
      if (!bc.pass)
        fail(r, c.label + " block " + std::to_string(m) + ": log2 bound " + std::to_string(static_cast<double>(bc.log2_bound)) +
                    " not below " + std::to_string(static_cast<double>(bc.log2_target)));
    }
    std::ostringstream os;
    os << c.label << ": M <= " << static_cast<double>(g.mass_upper()) << ", g(" << starts[20].str() << ") = " << static_cast<double>(top);
    r.notes.push_back(os.str());
  }
  r.seconds = t.seconds();
  return r;
}

SuiteResult verify_sampler_equivalence(const SuiteOptions& opt, std::int64_t replicas) {
  Timer t;
  SuiteResult r;
  r.name = "sampler-equivalence";
  constexpr int k = 5;
  auto graph = std::make_shared<const GraphModel>(GraphModel::parse("triangle"));
  WeightAssignment wa(WeightFunction::parse("power:2"), 1);

  // exact path law and prefix masses
  auto atoms = enumerate_paths<long double>(*graph, WalkKind::edge, wa, k);
  auto key_of = [](const std::vector<VertexId>& p, std::size_t len) {
    std::int64_t key = 0;
    for (std::size_t i = 0; i < len; ++i) key = key * 4 + p[i].value;
    return key * 8 + static_cast<std::int64_t>(len);
  };
  std::map<std::int64_t, long double> exact_path, prefix_mass;
  for (const auto& a : atoms) {
    exact_path[key_of(a.vertices, k + 1)] += a.prob;
    for (std::size_t len = 1; len <= static_cast<std::size_t>(k + 1); ++len) prefix_mass[key_of(a.vertices, len)] += a.prob;
  }

  std::map<std::int64_t, std::int64_t> laws[2];
  std::map<std::int64_t, std::int64_t> prefix_counts[2];
  for (int engine = 0; engine < 2; ++engine) {
    const std::uint64_t base = derive_seed(opt.seed, static_cast<std::uint64_t>(engine));
    for (std::int64_t i = 0; i < replicas; ++i) {
      WalkState s(graph, WalkKind::edge, wa, derive_seed(base, static_cast<std::uint64_t>(i)));
      std::vector<VertexId> path{s.current()};
      for (int j = 0; j < k; ++j) {
        if (engine == 0) s.step();
        else embedded_step(s);
        path.push_back(s.current());
      }
      ++laws[engine][key_of(path, k + 1)];
      for (std::size_t len = 1; len <= static_cast<std::size_t>(k + 1); ++len) ++prefix_counts[engine][key_of(path, len)];
    }
  }

  double tv = total_variation(laws[0], replicas, laws[1], replicas);
  ++r.checked;
  if (!(tv < 0.01)) fail(r, "total variation between engines " + std::to_string(tv) + " >= 0.01");
  r.notes.push_back("total variation " + std::to_string(tv));

  const char* names[2] = {"sequential", "rubin"};
  for (int engine = 0; engine < 2; ++engine) {
    // pooled one-step test: children of each visited prefix against the exact conditional law
    double stat = 0;
    int dof = 0;
    for (const auto& [pkey, pmass] : prefix_mass) {
      std::int64_t len = pkey % 8;
      if (len > k) continue;
      auto pc = prefix_counts[engine].find(pkey);
      if (pc == prefix_counts[engine].end()) continue;
      std::vector<std::int64_t> obs;
      std::vector<double> probs;
      std::int64_t stem = pkey / 8;
      for (std::int64_t v = 0; v < 3; ++v) {
        std::int64_t child = (stem * 4 + v) * 8 + len + 1;
        auto m = prefix_mass.find(child);
        if (m == prefix_mass.end()) continue;
        auto c = prefix_counts[engine].find(child);
        obs.push_back(c == prefix_counts[engine].end() ? 0 : c->second);
        probs.push_back(static_cast<double>(m->second / pmass));
      }
      auto chi = chi_square_gof(obs, probs);
      stat += chi.statistic;
      dof += chi.dof;
    }
    double p = chi_square_sf(stat, dof);
    ++r.checked;
    if (!(p >= 1e-3)) fail(r, std::string(names[engine]) + " one-step chi-square p = " + std::to_string(p));
    std::ostringstream os;
    os << names[engine] << " one-step chi-square " << stat << " on " << dof << " dof, p = " << p;
    r.notes.push_back(os.str());

    std::vector<std::int64_t> obs;
    std::vector<double> probs;
    for (const auto& [key, prob] : exact_path) {
      auto it = laws[engine].find(key);
      obs.push_back(it == laws[engine].end() ? 0 : it->second);
      probs.push_back(static_cast<double>(prob));
    }
    auto chi = chi_square_gof(obs, probs);
    ++r.checked;
    if (!(chi.p_value >= 1e-3)) fail(r, std::string(names[engine]) + " path-law chi-square p = " + std::to_string(chi.p_value));
    std::ostringstream os2;
    os2 << names[engine] << " path-law chi-square " << chi.statistic << " on " << chi.dof << " dof, p = " << chi.p_value;
    r.notes.push_back(os2.str());
  }
  r.seconds = t.seconds();
  return r;
}

SuiteResult verify_escape(const SuiteOptions& opt, std::int64_t replicas, std::int64_t horizon) {
  Timer t;
  SuiteResult r;
  r.name = "escape";
  EnsembleConfig c;
  c.name = "escape";
  c.graph = "lattice:1";
  c.kind = WalkKind::edge;
  c.weight = "power:3";
  c.l0 = 1;
  c.replicas = replicas;
  c.horizon = horizon;
  c.seed = opt.seed;
  c.workers = opt.workers;
  auto e = run_ensemble(c);
  auto rep = escape_statistics(e, {2, 4, 6, 8, 10});
  std::ostringstream head;
  head << "p = " << static_cast<double>(rep.p) << ", completed " << e.completed() << " of " << replicas;
  r.notes.push_back(head.str());
  if (e.failed > 0) fail(r, std::to_string(e.failed) + " replicas failed");
  for (const auto& row : rep.rows) {
    ++r.checked;
    std::ostringstream os;
    os << "n=" << row.n << ": empirical " << row.frequency << " (sigma " << row.sigma << "), bound "
       << static_cast<double>(row.bound);
    r.notes.push_back(os.str());
    if (!row.consistent) fail(r, os.str());
  }
  ++r.checked;
  if (!rep.monotone) fail(r, "empirical exceedance is not monotone in n");
  r.seconds = t.seconds();
  return r;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"joint-bounds",        "orderstat-bounds", "qm", "g-function",
                                                 "sampler-equivalence", "escape"};
  return names;
}

std::vector<SuiteResult> run_suite(const std::string& name, const SuiteOptions& opt) {
  if (name == "joint-bounds") return {verify_joint_bounds(WalkKind::edge), verify_joint_bounds(WalkKind::vertex)};
  if (name == "orderstat-bounds") return {verify_orderstat_bounds()};
  if (name == "qm") return {verify_qm()};
  if (name == "g-function") return {verify_g_function()};
  if (name == "sampler-equivalence") return {verify_sampler_equivalence(opt)};
  if (name == "escape") return {verify_escape(opt)};
  throw std::invalid_argument("unknown suite '" + name + "'");
}

std::string format_result(const SuiteResult& r) {
  std::ostringstream os;
  os << r.name << ": " << (r.pass() ? "PASS" : "FAIL") << " (" << r.checked << " checks, " << r.violations
     << " violations, " << r.seconds << " s)\n";
  for (const auto& n : r.notes) os << "  " << n << "\n";
  for (const auto& f : r.failures) os << "  violation: " << f << "\n";
  return os.str();
}

}  // namespace rrw::cli
