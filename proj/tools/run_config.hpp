#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsg/serialize.hpp"
#include "nsg/trial.hpp"
#include "nsg/verify.hpp"

namespace nsg::cli {

/// Everything a command reads. Scenario files hold the same keys as the
/// flags; flags win over file values, and the seed falls back to NSG_SEED.
struct RunConfig {
  verify::Scenario scenario;
  std::vector<DistributionSpec> distributions;
  std::vector<double> theta_grid;
  std::vector<double> sigma;
  std::optional<double> sum_sigma_sq;
  std::optional<double> c;
  std::optional<double> certificate_scale;
  std::optional<std::string> kind;
  std::optional<std::string> suite;
  std::optional<std::string> target;
  std::optional<std::string> method;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<double> alpha;
  std::optional<unsigned> threads;
  std::optional<std::string> format;
  std::optional<std::string> out;
  bool strict = false;

  TrialConfig trial_config() const;
  bool csv(const char* fallback = "json") const { return format.value_or(fallback) == "csv"; }
  void validate() const;
};

json to_json(const RunConfig& config);
RunConfig run_config_from_json(const json& j);

/// Reads and parses a scenario file. Missing or malformed files raise
/// ValidationError.
RunConfig load_run_config(const std::string& path);

}  // namespace nsg::cli
