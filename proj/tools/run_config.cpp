#include "run_config.hpp"

#include <fstream>

#include "nsg/errors.hpp"

namespace nsg::cli {

using nsg::to_json;
namespace {

// Keys owned by the embedded martingale scenario.
constexpr const char* kScenarioKeys[] = {"name", "rule", "family", "d_grid", "n_grid", "delta", "theta", "b", "B"};

template <class T>
void put(json& j, const char* key, const std::optional<T>& value) {
  if (value) j[key] = *value;
}

template <class T>
void take(const json& j, const char* key, std::optional<T>& value) {
  if (!j.contains(key)) return;
  try {
    value = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad field '") + key + "': " + e.what());
  }
}

template <class T>
void take(const json& j, const char* key, T& value) {
  std::optional<T> tmp;
  take(j, key, tmp);
  if (tmp) value = *tmp;
}

}  // namespace

TrialConfig RunConfig::trial_config() const {
  TrialConfig t;
  if (trials) t.trials = *trials;
  if (seed) t.seed = *seed;
  if (alpha) t.alpha = *alpha;
  if (threads) t.threads = *threads;
  return t;
}

void RunConfig::validate() const {
  if (format && *format != "json" && *format != "csv") throw ValidationError("format must be json or csv");
  if (certificate_scale && !(*certificate_scale > 0.0)) throw ValidationError("certificate_scale must be positive");
  if (c && !(*c >= 0.0)) throw ValidationError("c must be nonnegative");
  for (const auto& spec : distributions) spec.validate();
  trial_config().validate();
}

json to_json(const RunConfig& config) {
  json j = to_json(config.scenario);
  if (!config.distributions.empty()) {
    json list = json::array();
    for (const auto& spec : config.distributions) list.push_back(to_json(spec));
    j["distributions"] = list;
  }
  if (!config.theta_grid.empty()) j["theta_grid"] = config.theta_grid;
  if (!config.sigma.empty()) j["sigma"] = config.sigma;
  put(j, "sum_sigma_sq", config.sum_sigma_sq);
  put(j, "c", config.c);
  put(j, "certificate_scale", config.certificate_scale);
  put(j, "kind", config.kind);
  put(j, "suite", config.suite);
  put(j, "target", config.target);
  put(j, "method", config.method);
  put(j, "seed", config.seed);
  put(j, "trials", config.trials);
  put(j, "alpha", config.alpha);
  put(j, "threads", config.threads);
  put(j, "format", config.format);
  put(j, "out", config.out);
  j["strict"] = config.strict;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  reject_unknown_fields(j,
                        {"name", "rule", "family", "d_grid", "n_grid", "delta", "theta", "b", "B", "distributions",
                         "theta_grid", "sigma", "sum_sigma_sq", "c", "certificate_scale", "kind", "suite", "target",
                         "method", "seed", "trials", "alpha", "threads", "format", "out", "strict"},
                        "scenario file");
  RunConfig config;
  json scenario = json::object();
  for (const char* key : kScenarioKeys) {
    if (j.contains(key)) scenario[key] = j.at(key);
  }
  config.scenario = scenario_from_json(scenario);
  if (j.contains("distributions")) {
    if (!j.at("distributions").is_array()) throw ValidationError("distributions must be an array");
    for (const auto& entry : j.at("distributions")) config.distributions.push_back(distribution_from_json(entry));
  }
  take(j, "theta_grid", config.theta_grid);
  take(j, "sigma", config.sigma);
  take(j, "sum_sigma_sq", config.sum_sigma_sq);
  take(j, "c", config.c);
  take(j, "certificate_scale", config.certificate_scale);
  take(j, "kind", config.kind);
  take(j, "suite", config.suite);
  take(j, "target", config.target);
  take(j, "method", config.method);
  take(j, "seed", config.seed);
  take(j, "trials", config.trials);
  take(j, "alpha", config.alpha);
  take(j, "threads", config.threads);
  take(j, "format", config.format);
  take(j, "out", config.out);
  take(j, "strict", config.strict);
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario file '" + path + "': " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace nsg::cli
