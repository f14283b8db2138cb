#pragma once

#include <string>
#include <vector>

#include "slantcheck/report.hpp"
#include "slantcheck/scenario.hpp"

namespace slantcheck {

// Bundled example scenarios, embedded so the CLI works without data files.
// The same text ships under scenarios/ in the repository.
const std::vector<std::string>& builtin_names();
bool is_builtin(const std::string& name);

// Scenario text; throws ValidationError for unknown names.
const std::string& builtin_scenario_text(const std::string& name);

ScenarioConfig builtin_config(const std::string& name);

Report run_builtin(const std::string& name);

}  // namespace slantcheck
