#pragma once

#include <string>

#include "roboevo/evolution.hpp"

namespace roboevo {

// A named experiment arm: environment, module set, and evolution parameters.
// Parsed from a JSON .spec document; unrecognized fields are rejected with
// the offending field name so typos cannot silently fall back to defaults.
struct ExperimentSpec {
    std::string name;
    EvolutionConfig config;
};

ExperimentSpec parse_experiment_spec(const std::string& text);
ExperimentSpec load_experiment_spec(const std::string& path);

// Canonical JSON of a full configuration; also the config.snapshot content,
// so resumed runs can verify they continue the same experiment.
std::string evolution_config_json(const EvolutionConfig& config);

// Desk-scale override used by the --smoke flag.
void apply_smoke_overrides(EvolutionConfig& config);

}  // namespace roboevo
