#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "lrc/experiments.hpp"
#include "lrc/model.hpp"

namespace lrc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Single-instance job: one parameter set, one engine, N runs.
struct SimulateJob {
    ModelParams params;
    EngineKind engine = EngineKind::coupled;
    int runs = 1;
    std::uint64_t seed = 20260810;
    std::vector<double> checkpoints;
};

struct ParsedConfig {
    std::optional<ScenarioSpec> scenario;
    std::optional<SimulateJob> simulate;
    std::string out_dir = "out";
    std::string format = "csv";
};

// Strict JSON config parsing: unknown and duplicate keys are rejected with
// the offending key path; constraint violations name the field.
ParsedConfig parse_config(const std::string& json_text);

nlohmann::json family_to_json(const ParamFamily& fam);
ParamFamily family_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const ModelParams& params);

} // namespace lrc
