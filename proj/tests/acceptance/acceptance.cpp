// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rrw/graph.hpp"
#include "rrw/harness.hpp"
#include "rrw/seed.hpp"
#include "rrw/walk.hpp"
#include "rrw_cli/verify.hpp"

using namespace rrw;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome from_suite(const cli::SuiteResult& r) {
  std::ostringstream os;
  os << r.checked << " checks, " << r.violations << " violations, " << r.seconds << " s";
  for (std::size_t i = 0; i < std::min<std::size_t>(r.failures.size(), 3); ++i) os << "\n    " << r.failures[i];
  return {r.pass(), os.str()};
}

Outcome attraction(const std::vector<std::string>& graphs, WalkKind kind, const std::string& weight, double threshold) {
  Outcome o{true, ""};
  for (const auto& g : graphs) {
    EnsembleConfig c;
    c.name = "acceptance";
    c.graph = g;
    c.kind = kind;
    c.weight = weight;
    c.l0 = 1;
    c.replicas = 1000;
    c.horizon = 100000;
    c.window = 10000;
    c.seed = 20240607;
    c.workers = workers();
    auto e = run_ensemble(c);
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s%s: %lld/%lld detected, fraction %.4f, 95%% CI [%.4f, %.4f]",
                  o.detail.empty() ? "" : "; ", g.c_str(), static_cast<long long>(e.detected),
                  static_cast<long long>(e.completed()), e.attraction.estimate, e.attraction.lower,
                  e.attraction.upper);
    o.detail += buf;
    if (e.failed > 0 || e.attraction.estimate < threshold) o.pass = false;
  }
  return o;
}

// per-step invariants of one trajectory
struct InvariantObserver : Observer {
  bool vertex = false;
  bool bipartite = false;
  std::int64_t nbar = 0;  // vertex count of a finite graph, 0 otherwise
  std::vector<std::int64_t> prev;
  std::vector<std::string> errors;

  void fail(const WalkState& s, const std::string& what) {
    if (errors.size() < 5) errors.push_back(what + " at k=" + std::to_string(s.step_index()));
  }

  void observe(const WalkState& s) override {
    const auto k = s.step_index();
    if (s.total_count() != k) fail(s, "sum of counts differs from k");
    auto r = s.order_statistics();
    for (std::size_t i = 0; i < std::min(r.size(), prev.size()); ++i)
      if (r[i] < prev[i]) fail(s, "order statistic " + std::to_string(i + 1) + " decreased");
    prev = r;
    if (!vertex) return;
    if (bipartite) {
      std::int64_t d = 0;
      for (const auto& c : s.counts()) d += s.graph().distance(c.element[0]) % 2 == 0 ? c.count : -c.count;
      if (d > 2 || d < -2) fail(s, "bipartite sides differ by " + std::to_string(d));
    }
    if (nbar >= 3 && k > 0) {
      auto r1 = s.order_statistic(1), r2 = s.order_statistic(2);
      if (r1 < k / nbar || r1 > (k + 1) / 2) fail(s, "R1 outside [k/n, (k+1)/2]");
      if (r2 < (k - 1) / (2 * (nbar - 1)) || r2 > k / 2) fail(s, "R2 outside [(k-1)/(2(n-1)), k/2]");
    }
  }
};

Outcome invariants() {
  const std::vector<std::string> graphs{"triangle", "path:5",  "cycle:4",   "cycle:6", "complete:4",
                                        "star:4",   "segment:7", "lattice:2", "box:2:2", "tree:2"};
  const std::vector<std::string> weights{"power:1.5", "power:2", "power:3", "oscpow:1", "powerlog:1.5:2", "exp:0.3"};
  std::mt19937_64 rng(derive_seed(20240607, 11));
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  int bad = 0, bipartite_runs = 0;
  std::string first_error;
  for (int i = 0; i < 100; ++i) {
    auto gs = graphs[pick(graphs.size())];
    auto ws = weights[pick(weights.size())];
    auto kind = rng() % 2 == 0 ? WalkKind::edge : WalkKind::vertex;
    auto horizon = static_cast<std::int64_t>(1000 + pick(4001));
    auto seed = rng();
    auto g = std::make_shared<const GraphModel>(GraphModel::parse(gs));
    WeightAssignment wa(WeightFunction::parse(ws), 1);

    InvariantObserver obs;
    obs.vertex = kind == WalkKind::vertex;
    obs.bipartite = is_bipartite(*g).bipartite;
    obs.nbar = g->is_finite() ? static_cast<std::int64_t>(g->num_vertices()) : 0;
    if (obs.vertex && obs.bipartite) ++bipartite_runs;
    RunOptions opt;
    opt.stride = RunOptions::Stride::every;
    WalkState a(g, kind, wa, seed);
    auto sa = a.run(horizon, opt, {&obs});
    WalkState b(g, kind, wa, seed);
    auto sb = b.run(horizon, opt);
    if (to_json(sa, *g) != to_json(sb, *g)) obs.errors.push_back("rerun differs");
    if (!obs.errors.empty()) {
      ++bad;
      if (first_error.empty())
        first_error = gs + " " + to_string(kind) + " " + ws + " seed " + std::to_string(seed) + ": " + obs.errors[0];
    }
  }
  std::string detail = "100 configs, " + std::to_string(bipartite_runs) + " bipartite vertex walks, " +
                       std::to_string(bad) + " with violations";
  if (!first_error.empty()) detail += "\n    " + first_error;
  return {bad == 0, detail};
}

}  // namespace

int main() {
  cli::SuiteOptions opt;
  opt.workers = workers();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact dominance, edge walk joint law", [] { return from_suite(cli::verify_joint_bounds(WalkKind::edge)); }},
      {"exact dominance, vertex walk joint law",
       [] { return from_suite(cli::verify_joint_bounds(WalkKind::vertex)); }},
      {"order-statistic dominance", [] { return from_suite(cli::verify_orderstat_bounds()); }},
      {"Q_m dynamic program and c(b)^m bound", [] { return from_suite(cli::verify_qm()); }},
      {"edge walk attraction (>= 0.99)",
       [] { return attraction({"triangle", "segment:11"}, WalkKind::edge, "power:2", 0.99); }},
      {"vertex walk two-vertex attraction (>= 0.99)",
       [] { return attraction({"path:5", "cycle:4"}, WalkKind::vertex, "power:3", 0.99); }},
      {"bipartite vertex walk attraction (>= 0.95)",
       [] { return attraction({"cycle:4"}, WalkKind::vertex, "powerlog:1.5:2", 0.95); }},
      {"escape bound on Z", [&] { return from_suite(cli::verify_escape(opt)); }},
      {"sampler equivalence", [&] { return from_suite(cli::verify_sampler_equivalence(opt)); }},
      {"g-function construction", [] { return from_suite(cli::verify_g_function()); }},
      {"conservation and determinism", [] { return invariants(); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << criteria[i].first << " ("
              << static_cast<int>(secs + 0.5) << " s)\n    " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
