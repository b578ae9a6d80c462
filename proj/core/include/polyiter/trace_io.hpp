#pragma once

#include <nlohmann/json.hpp>

#include "polyiter/game.hpp"
#include "polyiter/policy_iteration.hpp"

namespace polyiter {

// Policy indices are written 1-based, matching the CLI convention.
nlohmann::json min_policy_to_json(const MinPolicy& p);
nlohmann::json max_policy_to_json(const MaxPolicy& p);
MinPolicy min_policy_from_json(const nlohmann::json& j);
MaxPolicy max_policy_from_json(const nlohmann::json& j);

nlohmann::json trace_to_json(const IterationTrace& trace);
IterationTrace trace_from_json(const nlohmann::json& j);

}  // namespace polyiter
