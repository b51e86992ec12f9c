#pragma once

#include <map>
#include <string>
#include <vector>

#include "loopgerbe/serialize.hpp"

namespace loopgerbe {

inline constexpr const char* kScenarioVersion = "loopgerbe-scenario/1";

struct TaskResult {
    std::string op;
    std::string output;
    Json value;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = true;
};

struct ScenarioReport {
    std::string source;
    std::vector<TaskResult> tasks;
    bool pass = true;
};

/// Operations a scenario task may name.
const std::vector<std::string>& scenario_operations();

/// Parses, resolves and runs a scenario file. Parse and reference errors
/// throw StructuralError with line positions.
ScenarioReport run_scenario(const std::string& path);
/// Same for scenario text; file references resolve against `base_dir`.
ScenarioReport run_scenario_text(const std::string& text, const std::string& origin, const std::string& base_dir);

Json to_json(const ScenarioReport& r);
std::string report_table(const ScenarioReport& r);

} // namespace loopgerbe
