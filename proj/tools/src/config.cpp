#include "rrw_cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rrw/error.hpp"
#include "rrw/graph.hpp"
#include "rrw/weight.hpp"

namespace rrw::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool ident(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

class ValueParser {
 public:
  ValueParser(const std::string& s, int line) : s_(s), line_(line) {}

  ConfigValue parse_all(const std::string& field) {
    field_ = field;
    ConfigValue v = value();
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] != '#') fail("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ConfigError(line_, field_, msg); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }

  ConfigValue value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    ConfigValue out;
    out.line = line_;
    char c = s_[pos_];
    if (c == '"') {
      out.v = string();
    } else if (c == '[') {
      ++pos_;
      std::vector<ConfigValue> items;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
      } else {
        while (true) {
          ConfigValue item = value();
          if (std::holds_alternative<std::vector<ConfigValue>>(item.v)) fail("nested arrays are not supported");
          items.push_back(std::move(item));
          skip_ws();
          if (pos_ >= s_.size()) fail("unterminated array");
          if (s_[pos_] == ',') {
            ++pos_;
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == ']') {
              ++pos_;
              break;
            }
            continue;
          }
          if (s_[pos_] == ']') {
            ++pos_;
            break;
          }
          fail("expected ',' or ']' in array");
        }
      }
      out.v = std::move(items);
    } else {
      std::size_t end = pos_;
      while (end < s_.size() && s_[end] != ',' && s_[end] != ']' && s_[end] != ' ' && s_[end] != '\t' &&
             s_[end] != '#' && s_[end] != '\r')
        ++end;
      std::string tok = s_.substr(pos_, end - pos_);
      pos_ = end;
      if (tok == "true") out.v = true;
      else if (tok == "false") out.v = false;
      else out.v = number(tok);
    }
    return out;
  }

  std::string string() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= s_.size()) break;
        char e = s_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unknown escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    fail("unterminated string");
  }

  std::variant<std::string, std::int64_t, double, bool, std::vector<ConfigValue>> number(const std::string& tok) {
    std::string t;
    for (char c : tok)
      if (c != '_') t += c;
    if (t.empty()) fail("missing value");
    const char* b = t.data();
    const char* e = b + t.size();
    if (*b == '+') ++b;
    bool is_float = t.find_first_of(".eE") != std::string::npos || t.find("inf") != std::string::npos ||
                    t.find("nan") != std::string::npos;
    if (!is_float) {
      std::int64_t x = 0;
      auto [p, ec] = std::from_chars(b, e, x);
      if (ec == std::errc() && p == e) return x;
      fail("invalid value '" + tok + "'");
    }
    double x = 0;
    auto [p, ec] = std::from_chars(b, e, x);
    if (ec == std::errc() && p == e) return x;
    fail("invalid value '" + tok + "'");
  }

  const std::string& s_;
  int line_;
  std::size_t pos_ = 0;
  std::string field_;
};

std::string type_name(const ConfigValue& v) {
  switch (v.v.index()) {
    case 0: return "string";
    case 1: return "integer";
    case 2: return "float";
    case 3: return "boolean";
    default: return "array";
  }
}

std::string get_string(const ConfigValue& v, const std::string& field) {
  if (auto* s = std::get_if<std::string>(&v.v)) return *s;
  throw ConfigError(v.line, field, "expected a string, got " + type_name(v));
}

std::int64_t get_int(const ConfigValue& v, const std::string& field) {
  if (auto* s = std::get_if<std::int64_t>(&v.v)) return *s;
  throw ConfigError(v.line, field, "expected an integer, got " + type_name(v));
}

double get_number(const ConfigValue& v, const std::string& field) {
  if (auto* s = std::get_if<std::int64_t>(&v.v)) return static_cast<double>(*s);
  if (auto* s = std::get_if<double>(&v.v)) return *s;
  throw ConfigError(v.line, field, "expected a number, got " + type_name(v));
}

const std::vector<ConfigValue>& get_array(const ConfigValue& v, const std::string& field) {
  if (auto* s = std::get_if<std::vector<ConfigValue>>(&v.v)) return *s;
  throw ConfigError(v.line, field, "expected an array, got " + type_name(v));
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string fmt_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, p);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& field, const std::string& msg)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? "" : field + ": ") + msg),
      line_(line),
      field_(field) {}

ConfigDocument ConfigDocument::parse(const std::string& text) {
  ConfigDocument doc;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s[0] == '[') {
      auto close = s.find(']');
      if (close == std::string::npos) throw ConfigError(line, "", "unterminated section header");
      std::string rest = trim(s.substr(close + 1));
      if (!rest.empty() && rest[0] != '#') throw ConfigError(line, "", "trailing characters after section header");
      section = trim(s.substr(1, close - 1));
      if (!ident(section)) throw ConfigError(line, "", "invalid section name '" + section + "'");
      if (doc.sections_.count(section)) throw ConfigError(line, section, "duplicate section");
      doc.sections_[section];
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    if (!ident(key)) throw ConfigError(line, "", "invalid key '" + key + "'");
    if (section.empty()) throw ConfigError(line, key, "key outside of any section");
    std::string field = section + "." + key;
    auto& sec = doc.sections_[section];
    if (sec.count(key)) throw ConfigError(line, field, "duplicate key");
    std::string rhs = s.substr(eq + 1);
    sec[key] = ValueParser(rhs, line).parse_all(field);
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(0, "", "cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

const ConfigValue* ConfigDocument::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

const std::map<std::string, ConfigValue>& ConfigDocument::section(const std::string& s) const {
  static const std::map<std::string, ConfigValue> empty;
  auto it = sections_.find(s);
  return it == sections_.end() ? empty : it->second;
}

std::vector<std::string> ConfigDocument::section_names() const {
  std::vector<std::string> out;
  for (auto& [k, v] : sections_) out.push_back(k);
  return out;
}

std::int64_t SweepAxes::cells() const {
  if (!present) return 0;
  std::int64_t n = 1;
  bool any = false;
  if (rho) n *= static_cast<std::int64_t>(rho->size()), any = true;
  if (horizon) n *= static_cast<std::int64_t>(horizon->size()), any = true;
  if (size) n *= static_cast<std::int64_t>(size->size()), any = true;
  return any ? n : 0;
}

std::string substitute(std::string s, const std::string& key, const std::string& value) {
  const std::string pat = "{" + key + "}";
  for (auto pos = s.find(pat); pos != std::string::npos; pos = s.find(pat, pos + value.size()))
    s.replace(pos, pat.size(), value);
  return s;
}

RunConfig RunConfig::from_document(const ConfigDocument& doc, bool allow_placeholders) {
  static const std::map<std::string, std::vector<std::string>> known = {
      {"experiment", {"name", "seed"}},
      {"graph", {"spec", "v0"}},
      {"walk", {"kind", "weight", "initial_weight", "engine"}},
      {"run", {"horizon", "replicas", "window", "workers"}},
      {"output", {"dir", "format"}},
      {"sweep", {"rho", "horizon", "size"}},
  };
  for (const auto& name : doc.section_names()) {
    auto it = known.find(name);
    const auto& sec = doc.section(name);
    if (it == known.end()) {
      int line = sec.empty() ? 0 : sec.begin()->second.line;
      throw ConfigError(line, name, "unknown section");
    }
    for (const auto& [key, val] : sec)
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        throw ConfigError(val.line, name + "." + key, "unknown key");
  }

  RunConfig c;
  int weight_line = 0, graph_line = 0, window_line = 0;
  if (auto* v = doc.find("experiment", "name")) {
    c.name = get_string(*v, "experiment.name");
    if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
      throw ConfigError(v->line, "experiment.name", "must be a non-empty file-name-safe string");
  }
  if (auto* v = doc.find("experiment", "seed")) {
    auto s = get_int(*v, "experiment.seed");
    if (s < 0) throw ConfigError(v->line, "experiment.seed", "must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (auto* v = doc.find("graph", "spec")) {
    c.graph = get_string(*v, "graph.spec");
    graph_line = v->line;
  }
  if (auto* v = doc.find("graph", "v0")) c.v0 = get_int(*v, "graph.v0");
  if (auto* v = doc.find("walk", "kind")) {
    try {
      c.kind = parse_walk_kind(get_string(*v, "walk.kind"));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(v->line, "walk.kind", e.what());
    }
  }
  if (auto* v = doc.find("walk", "weight")) {
    c.weight = get_string(*v, "walk.weight");
    weight_line = v->line;
  }
  if (auto* v = doc.find("walk", "initial_weight")) c.initial_weight = get_number(*v, "walk.initial_weight");
  if (auto* v = doc.find("walk", "engine")) {
    try {
      c.engine = parse_engine(get_string(*v, "walk.engine"));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(v->line, "walk.engine", e.what());
    }
  }
  if (auto* v = doc.find("run", "horizon")) {
    c.horizon = get_int(*v, "run.horizon");
    if (c.horizon < 0) throw ConfigError(v->line, "run.horizon", "must be non-negative");
  }
  if (auto* v = doc.find("run", "replicas")) {
    c.replicas = get_int(*v, "run.replicas");
    if (c.replicas < 0) throw ConfigError(v->line, "run.replicas", "must be non-negative");
  }
  if (auto* v = doc.find("run", "window")) {
    c.window = get_int(*v, "run.window");
    window_line = v->line;
    if (c.window < 0) throw ConfigError(v->line, "run.window", "must be non-negative");
  }
  if (auto* v = doc.find("run", "workers")) {
    auto w = get_int(*v, "run.workers");
    if (w < 1 || w > 1024) throw ConfigError(v->line, "run.workers", "must lie in [1, 1024]");
    c.workers = static_cast<unsigned>(w);
  }
  if (auto* v = doc.find("output", "dir")) c.out_dir = get_string(*v, "output.dir");
  if (auto* v = doc.find("output", "format")) {
    c.format = get_string(*v, "output.format");
    if (c.format != "csv" && c.format != "json")
      throw ConfigError(v->line, "output.format", "must be \"csv\" or \"json\"");
  }
  if (doc.has_section("sweep")) {
    c.sweep.present = true;
    if (auto* v = doc.find("sweep", "rho")) {
      std::vector<double> xs;
      for (const auto& x : get_array(*v, "sweep.rho")) xs.push_back(get_number(x, "sweep.rho"));
      c.sweep.rho = xs;
    }
    if (auto* v = doc.find("sweep", "horizon")) {
      std::vector<std::int64_t> xs;
      for (const auto& x : get_array(*v, "sweep.horizon")) {
        xs.push_back(get_int(x, "sweep.horizon"));
        if (xs.back() < 0) throw ConfigError(x.line, "sweep.horizon", "must be non-negative");
      }
      c.sweep.horizon = xs;
    }
    if (auto* v = doc.find("sweep", "size")) {
      std::vector<std::int64_t> xs;
      for (const auto& x : get_array(*v, "sweep.size")) {
        xs.push_back(get_int(x, "sweep.size"));
        if (xs.back() < 1) throw ConfigError(x.line, "sweep.size", "must be positive");
      }
      c.sweep.size = xs;
    }
  }

  bool templated = allow_placeholders && (c.weight.find('{') != std::string::npos || c.graph.find('{') != std::string::npos);
  if (!templated || c.weight.find('{') == std::string::npos) {
    try {
      auto w = WeightFunction::parse(c.weight);
      if (!(w.value_ld(c.initial_weight) > 0)) throw Error("w(initial_weight) must be positive");
    } catch (const std::exception& e) {
      throw ConfigError(weight_line, "walk.weight", e.what());
    }
  }
  if (!templated || c.graph.find('{') == std::string::npos) {
    try {
      auto g = GraphModel::parse(c.graph);
      if (c.v0) g = g.with_root(VertexId{*c.v0});
    } catch (const std::exception& e) {
      throw ConfigError(graph_line, "graph.spec", e.what());
    }
  }
  if (c.window > c.horizon && !(c.sweep.horizon && allow_placeholders))
    throw ConfigError(window_line, "run.window", "window larger than horizon");
  return c;
}

RunConfig RunConfig::load(const std::string& path, bool allow_placeholders) {
  return from_document(ConfigDocument::load(path), allow_placeholders);
}

std::string RunConfig::to_toml() const {
  std::ostringstream os;
  os << "[experiment]\nname = " << quote(name) << "\nseed = " << seed << "\n\n";
  os << "[graph]\nspec = " << quote(graph) << "\n";
  if (v0) os << "v0 = " << *v0 << "\n";
  os << "\n[walk]\nkind = " << quote(to_string(kind)) << "\nweight = " << quote(weight)
     << "\ninitial_weight = " << fmt_double(initial_weight) << "\nengine = " << quote(to_string(engine)) << "\n\n";
  os << "[run]\nhorizon = " << horizon << "\nreplicas = " << replicas << "\nwindow = " << window
     << "\nworkers = " << workers << "\n\n";
  os << "[output]\ndir = " << quote(out_dir) << "\nformat = " << quote(format) << "\n";
  if (sweep.present) {
    os << "\n[sweep]\n";
    auto list = [&](const char* key, const auto& xs, auto f) {
      os << key << " = [";
      for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << f(xs[i]);
      os << "]\n";
    };
    if (sweep.rho) list("rho", *sweep.rho, fmt_double);
    if (sweep.horizon) list("horizon", *sweep.horizon, [](std::int64_t x) { return std::to_string(x); });
    if (sweep.size) list("size", *sweep.size, [](std::int64_t x) { return std::to_string(x); });
  }
  return os.str();
}

EnsembleConfig RunConfig::ensemble() const {
  EnsembleConfig e;
  e.name = name;
  e.seed = seed;
  e.graph = graph;
  e.root = v0;
  e.kind = kind;
  e.weight = weight;
  e.l0 = initial_weight;
  e.engine = engine;
  e.horizon = horizon;
  e.replicas = replicas;
  e.window = window;
  e.workers = workers;
  e.resolved_config = to_toml();
  return e;
}

}  // namespace rrw::cli
