#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lqtrack/controllers.hpp"
#include "lqtrack/optimizer_dynamics.hpp"

namespace lqtrack {

enum class ControllerId {
    SsOgd,
    NaiveOgd,
    Ce,
    Offline,      // noncausal, sees the whole disturbance sequence
    SsBenchmark,  // open-loop per-step steady-state inputs
};

std::string to_string(ControllerId id);
ControllerId controller_from_string(const std::string& s);

enum class ReferenceKind { Constant, Ramp, Waypoints, DecayingRandom };

std::string to_string(ReferenceKind kind);
ReferenceKind reference_kind_from_string(const std::string& s);

struct ReferenceParams {
    Vector base;                     // r_0 (all kinds)
    Vector step;                     // ramp: per-step increment d
    std::vector<Vector> waypoints;   // waypoints: polyline vertices (base first)
    double speed = 0.0;              // waypoints: per-step arc length
    double initial_step = 1.0;       // decaying_random: ||Delta r_0||
    double decay = 0.99;             // decaying_random: per-step factor
};

/// Fully reproducible run description: same spec (including seed) gives a
/// bit-identical trace.
struct ScenarioSpec {
    LinearSystem system;
    CostWeights weights;
    ControllerId controller = ControllerId::SsOgd;
    ReferenceKind reference_kind = ReferenceKind::Constant;
    ReferenceParams reference_params;
    long horizon = 100;
    std::uint64_t seed = 0;
    std::optional<double> alpha;  // empty = auto-select
    std::optional<Vector> v0;     // default zero
    std::optional<Vector> x0;     // default r_0 (zero initial error)
};

struct SimulationTrace {
    std::vector<Vector> states;   // x_0 .. x_T
    std::vector<Vector> errors;   // e_0 .. e_T
    std::vector<Vector> inputs;   // u_0 .. u_{T-1}
    std::vector<Vector> bias;     // v_0 .. v_{T-1} (OGD variants; else empty)
    std::vector<double> costs;    // online costs c_0 .. c_{T-1}
    double total_cost = 0.0;      // J(e_0, u)
    double alpha_used = 0.0;      // step size actually applied (OGD variants)
};

struct RegretReport {
    double regret = 0.0;             // J(policy) - J(offline optimal)
    double regret_via_inputs = 0.0;  // input-space formula along the policy path
    double ss_regret = 0.0;          // vs the open-loop steady-state benchmark
    double path_length = 0.0;
    double theory_bound = 0.0;       // explicit bound (SS-OGD only; NaN otherwise)
};

/// Deterministic counter-based generator: unit-norm pseudo-random directions
/// derived by hashing (seed, stream, counter) with splitmix64, mapping 64-bit
/// words to uniforms in [0,1), and converting uniform pairs to standard
/// normals via Box-Muller before normalizing. No hidden state; reproducible
/// across platforms and languages.
Vector random_unit_direction(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                             Eigen::Index n);

ReferenceTrajectory generate_reference(ReferenceKind kind, const ReferenceParams& params,
                                       std::uint64_t seed, long T, Eigen::Index n);

ReferenceTrajectory scenario_reference(const ScenarioSpec& spec);

/// Closed-loop rollout under the sequential revelation order: the controller
/// sees (x_t, r_t), commits to u_t, then r_{t+1} (hence w_t) is revealed.
SimulationTrace rollout(const ScenarioSpec& spec);

/// Both regret formulas, the steady-state benchmark regret, the reference
/// path length and (for SS-OGD) the explicit theoretical bound.
RegretReport dynamic_regret(const SimulationTrace& trace, const ScenarioSpec& spec);

/// Input-space regret: sum_t ||u_t - u*_t||^2 weighted by (R + B'PB), where
/// u*_t is the optimal-controller input evaluated along the policy's own
/// trajectory: u*_t = -K e_t - feedforward_t.
double regret_via_inputs(const SimulationTrace& trace, const LinearSystem& system,
                         const SynthesizedGains& gains, const CostWeights& weights,
                         const DisturbanceSequence& disturbances);

/// J(trace) minus the cost of the open-loop steady-state benchmark sequence
/// started from the same e_0.
double ss_regret(const SimulationTrace& trace, const LinearSystem& system,
                 const SynthesizedGains& gains, const CostWeights& weights,
                 const DisturbanceSequence& disturbances);

struct BatchRow {
    long horizon = 0;
    double worst_regret = 0.0;
    double mean_regret = 0.0;
    double theory_bound = 0.0;  // max over trials
};

/// For each horizon, run `trials` independently seeded scenarios (per-trial
/// stream derived from (seed, trial)) and record the worst regret.
std::vector<BatchRow> batch_worst_case_regret(const ScenarioSpec& base_spec,
                                              const std::vector<long>& horizons, int trials,
                                              std::uint64_t seed);

}  // namespace lqtrack
