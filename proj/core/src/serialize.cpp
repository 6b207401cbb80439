#include "nsg/serialize.hpp"

#include <algorithm>
#include <cstring>

#include "nsg/errors.hpp"

namespace nsg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("expected an array of numbers");
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad field '") + key + "': " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

}  // namespace

void reject_unknown_fields(const json& object, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!object.is_object()) throw ValidationError(where + ": expected a JSON object");
  for (const auto& [key, value] : object.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!known) throw ValidationError(where + ": unknown field '" + key + "'");
  }
}

json to_json(const DistributionSpec& spec) {
  json j{{"family", std::string(to_string(spec.family))}, {"d", spec.dimension}, {"sigma", spec.sigma}};
  if (spec.family == Family::FiniteSupport) {
    json support = json::array();
    for (const auto& atom : spec.support) support.push_back(json::array({vector_json(atom.point), atom.probability}));
    j["support"] = support;
  }
  return j;
}

DistributionSpec distribution_from_json(const json& j) {
  reject_unknown_fields(j, {"family", "d", "sigma", "support"}, "distribution");
  DistributionSpec spec;
  spec.family = family_from_string(field<std::string>(j, "family"));
  spec.dimension = field<int>(j, "d");
  spec.sigma = field<double>(j, "sigma");
  if (j.contains("support")) {
    for (const auto& entry : j.at("support")) {
      if (!entry.is_array() || entry.size() != 2) throw ValidationError("support entries are [vector, probability]");
      spec.support.push_back({vector_from_json(entry[0]), entry[1].get<double>()});
    }
  }
  spec.validate();
  return spec;
}

json to_json(const NsgCertificate& cert) {
  return {{"sigma", cert.sigma},
          {"constant_multiplier", cert.constant_multiplier},
          {"parameter", cert.parameter()},
          {"provenance", std::string(to_string(cert.provenance))}};
}

json to_json(const AdaptiveRule& rule) {
  return std::visit(overloaded{
                        [](const ConstantRule& r) { return json{{"kind", "constant"}, {"sigma", r.sigma}}; },
                        [](const DoubleOnThreshold& r) {
                          return json{{"kind", "double_on_threshold"}, {"base", r.base}, {"thresholds", r.thresholds}};
                        },
                        [](const HistoryNormScaled& r) {
                          return json{{"kind", "history_norm_scaled"},
                                      {"floor", r.floor},
                                      {"cap", r.cap},
                                      {"gain", r.gain}};
                        },
                    },
                    rule);
}

AdaptiveRule rule_from_json(const json& j) {
  const auto kind = field<std::string>(j, "kind");
  AdaptiveRule rule;
  if (kind == "constant") {
    reject_unknown_fields(j, {"kind", "sigma"}, "rule");
    rule = ConstantRule{field_or(j, "sigma", 1.0)};
  } else if (kind == "double_on_threshold") {
    reject_unknown_fields(j, {"kind", "base", "thresholds"}, "rule");
    rule = DoubleOnThreshold{field_or(j, "base", 1.0), field_or(j, "thresholds", std::vector<double>{})};
  } else if (kind == "history_norm_scaled") {
    reject_unknown_fields(j, {"kind", "floor", "cap", "gain"}, "rule");
    rule = HistoryNormScaled{field<double>(j, "floor"), field<double>(j, "cap"), field<double>(j, "gain")};
  } else {
    throw ValidationError("unknown rule kind '" + kind + "'");
  }
  validate(rule);
  return rule;
}

json to_json(const SphereCover& cover) {
  json out = json::array();
  for (const auto& p : cover.points) out.push_back(vector_json(p));
  return out;
}

SphereCover cover_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("cover must be a nonempty array of points");
  SphereCover cover;
  for (const auto& entry : j) {
    Vector p = vector_from_json(entry);
    if (cover.points.empty()) cover.dimension = static_cast<int>(p.size());
    if (p.size() != cover.dimension) throw ValidationError("cover points have mixed dimensions");
    if (std::abs(p.norm() - 1.0) > 1e-12) throw ValidationError("cover points must be unit vectors");
    cover.points.push_back(std::move(p));
  }
  return cover;
}

json to_json(const bounds::DoublingGrid& grid) {
  return {{"b", grid.b}, {"B", grid.B}, {"psi", grid.psi}, {"theta", grid.theta}, {"iota", grid.iota},
          {"s", grid.size()}};
}

json to_json(const verify::TailEstimate& e) {
  return {{"threshold", e.threshold}, {"hits", e.hits}, {"trials", e.trials}, {"point", e.point()},
          {"upper", e.upper}};
}

json to_json(const verify::ConstantEstimate& e) {
  json grid = json::array();
  double violations = 0.0;
  for (const auto& cell : e.cells) {
    json c{{"d", cell.d},           {"n", cell.n},
           {"delta", cell.delta},   {"c_hat", cell.c_hat},
           {"norm_quantile", cell.norm_quantile}, {"violations", cell.violations},
           {"trials", cell.trials}};
    c["theta"] = cell.theta ? json(*cell.theta) : json(nullptr);
    grid.push_back(c);
    violations += cell.violations;
  }
  return {{"scenario", e.scenario},
          {"target", verify::to_string(e.target)},
          {"method", verify::to_string(e.method)},
          {"grid", grid},
          {"c_hat", e.c_hat},
          {"violations", violations},
          {"trials", e.trials},
          {"seed", e.seed},
          {"alpha", e.alpha},
          {"unstable", e.unstable}};
}

json to_json(const verify::EquivalenceReport& r) {
  return {{"sigma_tail", r.sigma_tail},
          {"sigma_moment", r.sigma_moment},
          {"sigma_mgf", r.sigma_mgf},
          {"ratio_tail_moment", r.ratio_tail_moment},
          {"ratio_tail_mgf", r.ratio_tail_mgf},
          {"ratio_moment_mgf", r.ratio_moment_mgf},
          {"t_grid", r.t_grid},
          {"p_max", r.p_max}};
}

json to_json(const verify::Scenario& s) {
  json j{{"name", s.name},   {"rule", to_json(s.rule)}, {"family", std::string(to_string(s.family))},
         {"d_grid", s.d_grid}, {"n_grid", s.n_grid},     {"delta", s.delta},
         {"b", s.b},           {"B", s.B}};
  if (s.theta) j["theta"] = *s.theta;
  return j;
}

verify::Scenario scenario_from_json(const json& j) {
  reject_unknown_fields(j, {"name", "rule", "family", "d_grid", "n_grid", "delta", "theta", "b", "B"}, "scenario");
  verify::Scenario s;
  s.name = field_or<std::string>(j, "name", s.name);
  if (j.contains("rule")) s.rule = rule_from_json(j.at("rule"));
  if (j.contains("family")) s.family = family_from_string(field<std::string>(j, "family"));
  s.d_grid = field_or(j, "d_grid", s.d_grid);
  s.n_grid = field_or(j, "n_grid", s.n_grid);
  s.delta = field_or(j, "delta", s.delta);
  if (j.contains("theta")) s.theta = field<double>(j, "theta");
  s.b = field_or(j, "b", s.b);
  s.B = field_or(j, "B", s.B);
  return s;
}

}  // namespace nsg
