#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lqtrack/simulator.hpp"

namespace lqtrack {

struct ScenarioRegistryEntry {
    std::string name;
    std::string description;
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    std::function<ScenarioSpec()> build;
};

/// Built-in scenarios, stable-sorted by name. Includes "quadrotor" (the
/// linearized 6-state model with Q = diag(100,100,1,1,0,0), R = 0.1 I),
/// "scalar-integrator" (A=B=Q=R=1) and "double-integrator".
const std::vector<ScenarioRegistryEntry>& scenario_registry();

/// Throws BadParamsError for unknown names.
ScenarioSpec build_scenario(const std::string& name);

/// The 6-state quadrotor plant and weights on their own, for reuse.
LinearSystem quadrotor_system();
CostWeights quadrotor_weights();

}  // namespace lqtrack
