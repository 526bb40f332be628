#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rrw/walk.hpp"

namespace rrw::cli {

struct SuiteResult {
  std::string name;
  std::int64_t checked = 0;
  std::int64_t violations = 0;
  // offending configurations, at most a few dozen
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  double seconds = 0;
  bool pass() const { return violations == 0; }
};

struct SuiteOptions {
  std::uint64_t seed = 20240607;
  unsigned workers = 1;
};

// oracle probability <= joint bound over every count vector with k <= 8
SuiteResult verify_joint_bounds(WalkKind kind);
SuiteResult verify_orderstat_bounds();
SuiteResult verify_qm();
SuiteResult verify_g_function();
SuiteResult verify_sampler_equivalence(const SuiteOptions& opt, std::int64_t replicas = 100000);
SuiteResult verify_escape(const SuiteOptions& opt, std::int64_t replicas = 10000, std::int64_t horizon = 100000);

const std::vector<std::string>& suite_names();
// throws std::invalid_argument for unknown names
std::vector<SuiteResult> run_suite(const std::string& name, const SuiteOptions& opt);

std::string format_result(const SuiteResult& r);

}  // namespace rrw::cli
