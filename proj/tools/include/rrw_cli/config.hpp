#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rrw/harness.hpp"

namespace rrw::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& field, const std::string& msg);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct ConfigValue {
  std::variant<std::string, std::int64_t, double, bool, std::vector<ConfigValue>> v;
  int line = 0;
};

// [section] tables of key = value; values are strings, integers, floats, booleans or flat arrays
class ConfigDocument {
 public:
  static ConfigDocument parse(const std::string& text);
  static ConfigDocument load(const std::string& path);

  bool has_section(const std::string& s) const { return sections_.count(s) > 0; }
  const ConfigValue* find(const std::string& section, const std::string& key) const;
  const std::map<std::string, ConfigValue>& section(const std::string& s) const;
  std::vector<std::string> section_names() const;

 private:
  std::map<std::string, std::map<std::string, ConfigValue>> sections_;
};

struct SweepAxes {
  std::optional<std::vector<double>> rho;
  std::optional<std::vector<std::int64_t>> horizon;
  std::optional<std::vector<std::int64_t>> size;
  bool present = false;
  std::int64_t cells() const;
};

struct RunConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  std::string graph = "triangle";
  std::optional<std::int64_t> v0;
  WalkKind kind = WalkKind::edge;
  std::string weight = "power:2";
  double initial_weight = 1;
  Engine engine = Engine::sequential;
  std::int64_t horizon = 10000;
  std::int64_t replicas = 100;
  std::int64_t window = 0;
  unsigned workers = 1;
  std::string out_dir = "out";
  std::string format = "csv";
  SweepAxes sweep;

  // validates every field; weight and graph strings may keep {rho}/{size} placeholders when
  // allow_placeholders is set
  static RunConfig from_document(const ConfigDocument& doc, bool allow_placeholders = false);
  static RunConfig load(const std::string& path, bool allow_placeholders = false);
  std::string to_toml() const;
  EnsembleConfig ensemble() const;
};

// replaces {rho} and {size}
std::string substitute(std::string s, const std::string& key, const std::string& value);

}  // namespace rrw::cli
