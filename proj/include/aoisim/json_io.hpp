#pragma once

#include <json.hpp>

#include "aoisim/analytic.hpp"
#include "aoisim/engine.hpp"
#include "aoisim/policies.hpp"
#include "aoisim/stats.hpp"

namespace aoisim {

using json = nlohmann::json;

json policy_to_json(const PolicySpec& spec);

// Strict parser: unknown keys, missing keys, and wrong types all throw
// std::invalid_argument.
PolicySpec policy_from_json(const json& j);

json to_json(const ThresholdSolution& solution);
json to_json(const EpochExpectations& expectations);
json to_json(const PatternSumResult& result);
json to_json(const RenewalDiagnostics& diagnostics);

// Scalar summary of a run; epoch records go to CSV, not JSON.
json to_json(const SimResult& result);

}  // namespace aoisim
