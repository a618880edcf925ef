#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "classeq/model.hpp"

namespace classeq {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DistributionConfig {
    std::string family = "normal";  // "normal" | "logistic"
    double location = 0.0;
    double scale = 1.0;
};

struct DesignerConfig {
    // Either an archetype name ("accuracy", "compliance", "moral_hazard",
    // "predatory"; moral_hazard takes w) or explicit cell payoffs.
    std::optional<std::string> archetype;
    double w = 0.0;
    std::optional<DesignerPayoffs> payoffs;
};

struct ScenarioConfig {
    int schema_version = 1;
    DistributionConfig distribution;
    double phi = 0.75;
    double t = 0.0;
    DesignerConfig designer;
};

/// Parses and validates; throws config_error with a precise message.
ScenarioConfig parse_scenario_config(const nlohmann::json& j);
ScenarioConfig load_scenario_config(const std::string& path);
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Resolves the archetype/payoffs and builds the immutable scenario.
/// Validation errors surface as config_error.
Scenario build_scenario(const ScenarioConfig& cfg);

DesignerPayoffs resolve_designer(const DesignerConfig& dc);

}  // namespace classeq
