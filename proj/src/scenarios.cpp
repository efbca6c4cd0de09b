#include "lqtrack/scenarios.hpp"

namespace lqtrack {

LinearSystem quadrotor_system() {
    Matrix A(6, 6);
    A << 1.000, 0, 0.096, 0, 0, 0.040,
         0, 1.000, 0, 0.096, -0.040, 0,
         0, 0, 0.894, 0, 0, 0.703,
         0, 0, 0, 0.894, -0.703, 0,
         0, 0, 0, 0.193, 0.452, 0,
         0, 0, -0.193, 0, 0, 0.452;
    Matrix B(6, 2);
    B << 0.004, 0,
         0, 0.004,
         0.106, 0,
         0, 0.106,
         0, -0.193,
         0.193, 0;
    return LinearSystem(A, B);
}

CostWeights quadrotor_weights() {
    Vector q(6);
    q << 100, 100, 1, 1, 0, 0;
    return CostWeights(q.asDiagonal(), 0.1 * Matrix::Identity(2, 2));
}

namespace {

ScenarioSpec make_quadrotor() {
    ScenarioSpec spec{quadrotor_system(), quadrotor_weights()};
    spec.controller = ControllerId::SsOgd;
    spec.reference_kind = ReferenceKind::Ramp;
    spec.reference_params.base = Vector::Zero(6);
    Vector step = Vector::Zero(6);
    step(0) = 0.01;
    step(1) = 0.01;
    spec.reference_params.step = step;
    spec.horizon = 400;
    return spec;
}

ScenarioSpec make_scalar_integrator() {
    Matrix one = Matrix::Constant(1, 1, 1.0);
    ScenarioSpec spec{LinearSystem(one, one), CostWeights(one, one)};
    spec.controller = ControllerId::SsOgd;
    // r_{t+1} = r_t - 1 gives the constant disturbance w_t = 1
    spec.reference_kind = ReferenceKind::Ramp;
    spec.reference_params.base = Vector::Zero(1);
    spec.reference_params.step = Vector::Constant(1, -1.0);
    spec.horizon = 300;
    return spec;
}

ScenarioSpec make_double_integrator() {
    Matrix A(2, 2);
    A << 1, 1, 0, 1;
    Matrix B(2, 1);
    B << 0, 1;
    ScenarioSpec spec{LinearSystem(A, B), CostWeights(Matrix::Identity(2, 2),
                                                      Matrix::Identity(1, 1))};
    spec.controller = ControllerId::SsOgd;
    spec.reference_kind = ReferenceKind::Ramp;
    Vector step(2);
    step << 0.02, 0.0;
    spec.reference_params.base = Vector::Zero(2);
    spec.reference_params.step = step;
    spec.horizon = 300;
    return spec;
}

}  // namespace

const std::vector<ScenarioRegistryEntry>& scenario_registry() {
    static const std::vector<ScenarioRegistryEntry> registry = [] {
        std::vector<ScenarioRegistryEntry> entries;
        entries.push_back({"double-integrator", "2-state double integrator, ramp reference",
                           2, 1, make_double_integrator});
        entries.push_back({"quadrotor",
                           "6-state linearized quadrotor with PI velocity loop, 2-D ramp",
                           6, 2, make_quadrotor});
        entries.push_back({"scalar-integrator",
                           "scalar system A=B=Q=R=1 with constant unit disturbance", 1, 1,
                           make_scalar_integrator});
        return entries;  // kept sorted by name
    }();
    return registry;
}

ScenarioSpec build_scenario(const std::string& name) {
    for (const auto& entry : scenario_registry()) {
        if (entry.name == name) return entry.build();
    }
    throw BadParamsError("unknown scenario: " + name);
}

}  // namespace lqtrack
