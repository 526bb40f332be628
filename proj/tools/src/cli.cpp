#include "rrw_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "rrw/bounds.hpp"
#include "rrw/error.hpp"
#include "rrw/harness.hpp"
#include "rrw_cli/config.hpp"
#include "rrw_cli/verify.hpp"

namespace rrw::cli {

namespace {

constexpr std::int64_t kMaxSweepCells = 10000;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  std::optional<std::string> format;

  void apply(RunConfig& c) const {
    if (seed) c.seed = *seed;
    if (out) c.out_dir = *out;
    if (workers) c.workers = *workers;
    if (format) c.format = *format;
  }
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1u, 1024u));
  app->add_option("--format", o.format, "artifact format")->check(CLI::IsMember({"csv", "json"}));
}

void print_summary(std::ostream& out, const EnsembleResult& e) {
  const auto& c = e.config;
  out << std::left << std::setw(24) << "experiment" << c.name << "\n"
      << std::setw(24) << "graph" << c.graph << "\n"
      << std::setw(24) << "walk" << to_string(c.kind) << " w=" << c.weight << " l0=" << c.l0 << " engine="
      << to_string(c.engine) << "\n"
      << std::setw(24) << "horizon / window" << c.horizon << " / " << e.window << "\n"
      << std::setw(24) << "replicas" << e.completed() << " completed, " << e.failed << " failed\n"
      << std::setw(24) << "attraction fraction" << e.attraction.estimate << "  95% CI [" << e.attraction.lower << ", "
      << e.attraction.upper << "]\n";
}

int cmd_simulate(const std::string& path, const Overrides& o, std::ostream& out) {
  RunConfig c = RunConfig::load(path);
  o.apply(c);
  auto e = run_ensemble(c.ensemble());
  print_summary(out, e);
  for (const auto& f : write_artifacts(e, c.out_dir, c.format)) out << "wrote " << f << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, const Overrides& o, std::ostream& out) {
  SuiteOptions opt;
  if (o.seed) opt.seed = *o.seed;
  if (o.workers) opt.workers = *o.workers;
  auto results = run_suite(suite, opt);
  bool ok = true;
  nlohmann::ordered_json report;
  report["schema_version"] = kSchemaVersion;
  report["suite"] = suite;
  report["seed"] = opt.seed;
  report["results"] = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    out << format_result(r);
    ok = ok && r.pass();
    report["results"].push_back({{"name", r.name},
                                 {"checked", r.checked},
                                 {"violations", r.violations},
                                 {"failures", r.failures},
                                 {"notes", r.notes}});
  }
  if (o.out) {
    std::filesystem::create_directories(*o.out);
    std::string file = *o.out + "/verify-" + suite + "-" + std::to_string(opt.seed) + ".json";
    std::ofstream(file) << report.dump(2) << "\n";
    out << "wrote " << file << "\n";
  }
  return ok ? 0 : 1;
}

std::string fmt_axis(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

int cmd_sweep(const std::string& path, const Overrides& o, std::ostream& out, std::ostream& err) {
  RunConfig base = RunConfig::load(path, true);
  o.apply(base);
  if (!base.sweep.present) throw ConfigError(0, "sweep", "missing [sweep] section");
  const std::int64_t cells = base.sweep.cells();
  if (cells > kMaxSweepCells)
    throw ConfigError(0, "sweep", "grid expands to " + std::to_string(cells) + " runs, limit " +
                                      std::to_string(kMaxSweepCells));
  std::vector<std::optional<double>> rhos{std::nullopt};
  std::vector<std::optional<std::int64_t>> horizons{std::nullopt}, sizes{std::nullopt};
  if (base.sweep.rho) rhos.assign(base.sweep.rho->begin(), base.sweep.rho->end());
  if (base.sweep.horizon) horizons.assign(base.sweep.horizon->begin(), base.sweep.horizon->end());
  if (base.sweep.size) sizes.assign(base.sweep.size->begin(), base.sweep.size->end());

  std::filesystem::create_directories(base.out_dir);
  std::ostringstream summary;
  summary << "cell,rho,horizon_axis,size,status,error," << summary_csv_header();
  int failed = 0;
  std::int64_t index = 0;
  if (cells > 0) {
    for (const auto& rho : rhos) {
      for (const auto& hz : horizons) {
        for (const auto& sz : sizes) {
          RunConfig c = base;
          c.sweep = SweepAxes{};
          c.name = base.name + "-cell" + std::to_string(index);
          if (rho) {
            c.weight = substitute(c.weight, "rho", fmt_axis(*rho));
            c.graph = substitute(c.graph, "rho", fmt_axis(*rho));
          }
          if (sz) {
            c.weight = substitute(c.weight, "size", std::to_string(*sz));
            c.graph = substitute(c.graph, "size", std::to_string(*sz));
          }
          if (hz) c.horizon = *hz;
          summary << index << ',' << (rho ? fmt_axis(*rho) : "") << ',' << (hz ? std::to_string(*hz) : "") << ','
                  << (sz ? std::to_string(*sz) : "") << ',';
          try {
            if (c.weight.find('{') != std::string::npos || c.graph.find('{') != std::string::npos)
              throw Error("unresolved placeholder in graph or weight");
            auto e = run_ensemble(c.ensemble());
            write_artifacts(e, c.out_dir, c.format);
            summary << "ok,," << summary_csv_row(e);
            out << "cell " << index << ": " << c.graph << " " << c.weight << " K=" << c.horizon
                << " attraction " << e.attraction.estimate << "\n";
          } catch (const std::exception& ex) {
            ++failed;
            std::string msg = ex.what();
            for (auto& ch : msg)
              if (ch == ',' || ch == '\n') ch = ';';
            summary << "failed," << msg << ",,,,,,,,,,,,,,,,,\n";
            err << "cell " << index << " failed: " << ex.what() << "\n";
          }
          ++index;
        }
      }
    }
  }
  std::string file = base.out_dir + "/" + base.name + "-" + std::to_string(base.seed) + "-sweep.csv";
  std::ofstream(file) << summary.str();
  out << index << " cells, " << failed << " failed; wrote " << file << "\n";
  return failed > 0 ? 1 : 0;
}

int cmd_classify(const std::string& spec, double l0, std::ostream& out) {
  auto w = WeightFunction::parse(spec);
  auto c = classify(w, l0);
  nlohmann::ordered_json j;
  j["weight"] = w.spec();
  j["initial_weight"] = l0;
  j["classifiable"] = c.classifiable;
  j["sum_inverse_finite"] = c.azero_nat;
  j["sum_sqrt_i_over_w_finite"] = c.supinfv1;
  j["sum_i_over_w_finite"] = c.supinfv;
  j["sup_i_over_w_finite"] = c.bipbip;
  j["regime"] = c.regime;
  if (!c.note.empty()) j["note"] = c.note;
  out << j.dump(2) << "\n";
  return 0;
}

struct BoundArgs {
  std::string type;
  std::string graph = "triangle";
  std::optional<std::int64_t> v0;
  std::string kind = "edge";
  std::string weight = "power:2";
  double l0 = 1;
  std::int64_t k = 0;
  std::int64_t ell = 0;
  std::string counts;
  std::optional<std::int64_t> landing;
  int m = 1;
  std::int64_t a = 0;
  double b = 1;
  std::optional<std::int64_t> c;
  std::int64_t j = 0;
  std::int64_t n = 1;
  std::optional<int> degree;
  std::string l0s;
  std::string ells;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_bounds(const BoundArgs& a, std::ostream& out) {
  BoundReport r;
  r.name = a.type;
  auto w = WeightFunction::parse(a.weight);
  auto kind = parse_walk_kind(a.kind);
  auto graph = [&] {
    auto g = GraphModel::parse(a.graph);
    return a.v0 ? g.with_root(VertexId{*a.v0}) : g;
  };
  r.config = {{"weight", w.spec()}, {"initial_weight", fmt_axis(a.l0)}};
  if (a.type == "qm") {
    r.formula = "sum over ordered tuples c >= h1 >= ... >= hm >= 0 with sum a of prod 1/w(b + h)";
    r.config.insert(r.config.end(), {{"m", std::to_string(a.m)}, {"a", std::to_string(a.a)},
                                     {"b", fmt_axis(a.b)}, {"c", a.c ? std::to_string(*a.c) : "inf"}});
    r.values.push_back({"Q", q_m(a.m, a.a, a.b, a.c, w)});
  } else if (a.type == "c-bound") {
    r.formula = "sum_{s=0}^{j} Q_m(s + a; b; c) <= c(b)^m";
    auto chk = c_bound_check(a.m, a.a, a.j, a.b, w, a.c);
    r.values.push_back({"lhs", chk.lhs});
    r.values.push_back({"rhs_lower", BoundValue::of(chk.rhs_lower)});
    r.values.push_back({"rhs_upper", BoundValue::of(chk.rhs_upper)});
    r.config.push_back({"pass", chk.pass ? "true" : "false"});
  } else if (a.type == "joint") {
    auto g = graph();
    WeightAssignment wa(w, a.l0);
    r.config.insert(r.config.end(), {{"graph", g.spec()}, {"kind", to_string(kind)}, {"k", std::to_string(a.k)},
                                     {"counts", a.counts}});
    VertexId landing = a.landing ? VertexId{*a.landing} : g.root();
    if (kind == WalkKind::edge) {
      r.formula = "[prod_e w(l0) / min_{e at v0} w(l0)] [sum_{e at v} w(l + l0) / prod_e w(l + l0)]";
      std::map<EdgeId, std::int64_t> m;
      for (const auto& item : split(a.counts, ',')) {
        auto colon = item.find(':');
        auto dash = item.find('-');
        if (colon == std::string::npos || dash == std::string::npos || dash > colon)
          throw Error("edge counts look like 0-1:2,1-2:0");
        m[EdgeId::make(VertexId{std::stoll(item.substr(0, dash))},
                       VertexId{std::stoll(item.substr(dash + 1, colon - dash - 1))})] = std::stoll(item.substr(colon + 1));
      }
      r.values.push_back({"bound", errw_joint_bound(g, wa, m, a.k, landing)});
    } else {
      r.formula = "[prod_{v != v0} w(l0) / min_{v ~ v0} w(l0)] [sum_{u ~ v'} w(l + l0) / prod_{u != v'} w(l + l0)]";
      std::map<VertexId, std::int64_t> m;
      for (const auto& item : split(a.counts, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error("vertex counts look like 0:1,2:3");
        m[VertexId{std::stoll(item.substr(0, colon))}] = std::stoll(item.substr(colon + 1));
      }
      r.values.push_back({"bound", vrrw_joint_bound(g, wa, m, a.k, landing)});
    }
  } else if (a.type == "orderstat") {
    auto g = graph();
    r.config.insert(r.config.end(), {{"graph", g.spec()}, {"kind", to_string(kind)}, {"k", std::to_string(a.k)},
                                     {"ell", std::to_string(a.ell)}});
    if (kind == WalkKind::edge) {
      int nbar = static_cast<int>(g.num_edges());
      r.formula = "C [1/w~(l + l0) + sum_i 1/w~(i + l0) Q_{n-2}(k - i - l; l0; inf)], C = |V| n! (n-1) c~^(n-2)";
      r.values.push_back({"C", errw_orderstat_constant(nbar, static_cast<std::int64_t>(g.num_vertices()), w, a.l0)});
      r.values.push_back({"bound", errw_orderstat_bound(nbar, static_cast<std::int64_t>(g.num_vertices()), w, a.l0, a.k, a.ell)});
    } else {
      int nbar = static_cast<int>(g.num_vertices());
      r.formula = "C [l/w~(l + l0) + sum_{i=l}^{k-l} 1/w~(i + l0)], C = 2 n n! c~^(n-3) (A + n - 1)";
      r.values.push_back({"C", vrrw_orderstat_constant(nbar, w, a.l0)});
      r.values.push_back({"bound", vrrw_orderstat_bound(nbar, w, a.l0, a.k, a.ell)});
    }
  } else if (a.type == "bipartite" || a.type == "bipbip" || a.type == "triangle-free") {
    auto g = graph();
    r.config.insert(r.config.end(), {{"graph", g.spec()}, {"k", std::to_string(a.k)}, {"ell", std::to_string(a.ell)}});
    if (a.type == "bipartite") {
      r.formula = "C [l^(1/2)/w~(l + l0) + k^(-1/2) sum_{i=l}^{k-l} 1/w~(i + l0)]";
      r.values.push_back({"C", bipartite_orderstat_constant(static_cast<int>(g.num_vertices()), w, a.l0)});
      r.values.push_back({"bound", bipartite_orderstat_bound(g, w, a.l0, a.k, a.ell)});
    } else if (a.type == "bipbip") {
      r.formula = "C' / w~(l + l0)";
      r.values.push_back({"bound", bipartite_bipbip_bound(g, w, a.l0, a.k, a.ell)});
    } else {
      r.formula = "C [l^(1/2)/w~(l + l0) + k^(-1/2) sum_{i=l}^{k-l} 1/w~(i + l0)]";
      r.values.push_back({"bound", triangle_free_orderstat_bound(g, w, a.l0, a.k, a.ell)});
    }
  } else if (a.type == "stuck" || a.type == "escape") {
    int degree = a.degree ? *a.degree : graph().degree_bound();
    WeightAssignment wa(w, a.l0);
    auto sp = stuck_probability_p(degree, wa);
    r.formula = a.type == "stuck" ? "p = exp(-2 D sup w(l0) sum_{i>=1} 1/w(i + l0))" : "(1 - p)^[n/2]";
    r.config.push_back({"degree", std::to_string(degree)});
    r.values.push_back({"p", BoundValue::of(sp.p)});
    r.values.push_back({"product_form", BoundValue::of(sp.product_form)});
    r.remainders.push_back({"series_upper", sp.series_upper});
    if (a.type == "escape") {
      r.config.push_back({"n", std::to_string(a.n)});
      r.values.push_back({"escape_bound", BoundValue::of(escape_bound(a.n, sp.p))});
    }
  } else if (a.type == "permuted") {
    std::vector<double> l0s;
    std::vector<std::int64_t> ells;
    for (const auto& s : split(a.l0s, ',')) l0s.push_back(std::stod(s));
    for (const auto& s : split(a.ells, ',')) ells.push_back(std::stoll(s));
    PermutedOptions opt;
    opt.kind = kind;
    opt.num_vertices = a.degree ? *a.degree : static_cast<std::int64_t>(l0s.size());
    r.formula = "sum over permutations of the joint bound";
    r.config.insert(r.config.end(), {{"l0s", a.l0s}, {"ells", a.ells}});
    r.values.push_back({"bound", permuted_orderstat_bound(w, l0s, ells, opt)});
  } else {
    throw std::invalid_argument("unknown bound type '" + a.type + "'");
  }
  out << to_json(r) << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"reinforced random walk simulator and bound checker", "rrw"};
  app.require_subcommand(1);

  Overrides o;
  std::string config_path;
  auto* sim = app.add_subcommand("simulate", "run an ensemble from a config file");
  sim->add_option("--config", config_path, "config file")->required();
  add_common(sim, o);

  std::string suite;
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("suite", suite, "joint-bounds, orderstat-bounds, qm, g-function, sampler-equivalence, escape")
      ->required();
  add_common(ver, o);

  auto* swp = app.add_subcommand("sweep", "run a parameter grid");
  swp->add_option("--config", config_path, "config file with a [sweep] section")->required();
  add_common(swp, o);

  std::string weight_spec;
  double l0 = 1;
  auto* cls = app.add_subcommand("classify-weight", "print the summability class of a weight");
  cls->add_option("weight", weight_spec, "weight spec, e.g. power:2")->required();
  cls->add_option("--l0", l0, "initial weight");

  BoundArgs ba;
  auto* bnd = app.add_subcommand("bounds", "evaluate an analytic bound");
  bnd->add_option("type", ba.type, "qm, c-bound, joint, orderstat, bipartite, bipbip, triangle-free, stuck, escape, permuted")
      ->required();
  bnd->add_option("--graph", ba.graph);
  bnd->add_option("--v0", ba.v0);
  bnd->add_option("--kind", ba.kind);
  bnd->add_option("--weight", ba.weight);
  bnd->add_option("--l0", ba.l0);
  bnd->add_option("--k", ba.k);
  bnd->add_option("--ell", ba.ell);
  bnd->add_option("--counts", ba.counts, "edge counts 0-1:2,1-2:0 or vertex counts 0:1,2:3");
  bnd->add_option("--landing", ba.landing);
  bnd->add_option("--m", ba.m);
  bnd->add_option("--a", ba.a);
  bnd->add_option("--b", ba.b);
  bnd->add_option("--c", ba.c);
  bnd->add_option("--j", ba.j);
  bnd->add_option("--n", ba.n);
  bnd->add_option("--degree", ba.degree);
  bnd->add_option("--l0s", ba.l0s);
  bnd->add_option("--ells", ba.ells);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, o, out);
    if (ver->parsed()) return cmd_verify(suite, o, out);
    if (swp->parsed()) return cmd_sweep(config_path, o, out, err);
    if (cls->parsed()) return cmd_classify(weight_spec, l0, out);
    if (bnd->parsed()) return cmd_bounds(ba, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace rrw::cli
