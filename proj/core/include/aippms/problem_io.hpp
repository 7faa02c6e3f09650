#pragma once

#include <optional>

#include <nlohmann/json.hpp>

#include "aippms/domains.hpp"

namespace aippms {

/// Sensor object; an infinite range is written as null.
nlohmann::json sensor_to_json(const SensorSpec& sensor);
SensorSpec sensor_from_json(const nlohmann::json& j);

/// Self-contained Problem JSON: graph, sensors, prior, observation tables and
/// utility parameters, plus an optional true world for replay. Supported
/// utilities are CoverageUtility ("coverage") and ModularUtility ("modular");
/// anything else throws ConfigError.
nlohmann::json problem_to_json(const Problem& problem, const WorldState* world = nullptr);

struct LoadedProblem {
  Problem problem;
  std::optional<WorldState> world;
};

/// Inverse of problem_to_json. Throws ConfigError on malformed input.
LoadedProblem problem_from_json(const nlohmann::json& doc);

}  // namespace aippms
