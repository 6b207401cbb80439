#pragma once

#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

#include "nsg/bounds.hpp"
#include "nsg/cover.hpp"
#include "nsg/distributions.hpp"
#include "nsg/martingale.hpp"
#include "nsg/verify.hpp"

namespace nsg {

using json = nlohmann::json;

/// Throws ValidationError if `object` has a key outside `allowed`.
void reject_unknown_fields(const json& object, std::initializer_list<const char*> allowed, const std::string& where);

// {"family": "...", "d": 3, "sigma": 1.0, "support": [[[x...], p], ...]}
json to_json(const DistributionSpec& spec);
DistributionSpec distribution_from_json(const json& j);

json to_json(const NsgCertificate& cert);

// {"kind": "constant" | "double_on_threshold" | "history_norm_scaled", ...}
json to_json(const AdaptiveRule& rule);
AdaptiveRule rule_from_json(const json& j);

/// Array of unit vectors.
json to_json(const SphereCover& cover);
SphereCover cover_from_json(const json& j);

json to_json(const bounds::DoublingGrid& grid);
json to_json(const verify::TailEstimate& estimate);
json to_json(const verify::ConstantEstimate& estimate);
json to_json(const verify::EquivalenceReport& report);

json to_json(const verify::Scenario& scenario);
verify::Scenario scenario_from_json(const json& j);

}  // namespace nsg
