#pragma once

#include <string>
#include <vector>

#include "run_config.hpp"

namespace nsg::cli {

/// One contract evaluated by a verification suite. `slack` is signed so that
/// negative means the contract is broken.
struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  double slack = 0.0;
  bool pass = true;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;

  bool pass() const;
  double min_slack() const;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"tail",     "mgf",       "lieb",        "peeling",
                                              "hoeffding", "adaptive", "equivalence", "cover"};
  return names;
}

/// Throws UsageError for an unknown suite name.
SuiteReport run_suite(const std::string& suite, const RunConfig& config);

json to_json(const SuiteReport& report, const RunConfig& config);

}  // namespace nsg::cli
