#pragma once

#include <ostream>
#include <string>

#include "run_config.hpp"

namespace nsg::cli {

/// A rendered report plus the exit status it implies.
struct Outcome {
  std::string text;
  int status = 0;
  std::vector<std::string> warnings;
};

Outcome cmd_bounds(const RunConfig& config);
Outcome cmd_verify(const RunConfig& config);
Outcome cmd_simulate(const RunConfig& config);
Outcome cmd_estimate_constant(const RunConfig& config);
Outcome cmd_sample(const RunConfig& config);

}  // namespace nsg::cli
