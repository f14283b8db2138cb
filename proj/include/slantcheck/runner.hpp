#pragma once

#include "slantcheck/report.hpp"
#include "slantcheck/scenario.hpp"

namespace slantcheck {

// Runs the scenario's checks in declaration order.  With structure_only set,
// only the ambient-structure checks run (almost_hermitian, anticommute,
// decomposition, nabla_family); everything else is reported as skipped.
Report run_scenario(const ScenarioConfig& cfg, bool structure_only = false);

// Check kinds the runner understands, for diagnostics.
const std::vector<std::string>& known_check_kinds();

}  // namespace slantcheck
