#include "lqtrack/simulator.hpp"

#include <cmath>

namespace lqtrack {

std::string to_string(ControllerId id) {
    switch (id) {
        case ControllerId::SsOgd: return "ss-ogd";
        case ControllerId::NaiveOgd: return "naive-ogd";
        case ControllerId::Ce: return "ce";
        case ControllerId::Offline: return "offline";
        case ControllerId::SsBenchmark: return "ss-benchmark";
    }
    return "?";
}

ControllerId controller_from_string(const std::string& s) {
    if (s == "ss-ogd") return ControllerId::SsOgd;
    if (s == "naive-ogd") return ControllerId::NaiveOgd;
    if (s == "ce") return ControllerId::Ce;
    if (s == "offline") return ControllerId::Offline;
    if (s == "ss-benchmark") return ControllerId::SsBenchmark;
    throw BadParamsError("unknown controller id: " + s);
}

std::string to_string(ReferenceKind kind) {
    switch (kind) {
        case ReferenceKind::Constant: return "constant";
        case ReferenceKind::Ramp: return "ramp";
        case ReferenceKind::Waypoints: return "waypoints";
        case ReferenceKind::DecayingRandom: return "decaying_random";
    }
    return "?";
}

ReferenceKind reference_kind_from_string(const std::string& s) {
    if (s == "constant") return ReferenceKind::Constant;
    if (s == "ramp") return ReferenceKind::Ramp;
    if (s == "waypoints") return ReferenceKind::Waypoints;
    if (s == "decaying_random") return ReferenceKind::DecayingRandom;
    throw BadParamsError("unknown reference kind: " + s);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double to_unit_interval(std::uint64_t word) {
    // 53 uniform mantissa bits in [0, 1)
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

}  // namespace

Vector random_unit_direction(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                             Eigen::Index n) {
    std::uint64_t state = splitmix64(seed);
    state = splitmix64(state ^ stream);
    state = splitmix64(state ^ counter);

    Vector eta(n);
    std::uint64_t i = 0;
    for (Eigen::Index k = 0; k < n; k += 2) {
        double u1 = to_unit_interval(splitmix64(state + i++));
        const double u2 = to_unit_interval(splitmix64(state + i++));
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        eta(k) = radius * std::cos(2.0 * M_PI * u2);
        if (k + 1 < n) eta(k + 1) = radius * std::sin(2.0 * M_PI * u2);
    }
    const double norm = eta.norm();
    if (norm < 1e-12) {
        eta.setZero();
        eta(0) = 1.0;
        return eta;
    }
    return eta / norm;
}

ReferenceTrajectory generate_reference(ReferenceKind kind, const ReferenceParams& params,
                                       std::uint64_t seed, long T, Eigen::Index n) {
    if (T < 1) throw BadParamsError("generate_reference: horizon must be >= 1");
    const Vector base = params.base.size() == n ? params.base : Vector::Zero(n);
    if (params.base.size() != 0 && params.base.size() != n) {
        throw BadParamsError("generate_reference: base dimension mismatch");
    }

    ReferenceTrajectory ref;
    ref.points.reserve(static_cast<std::size_t>(T) + 1);
    switch (kind) {
        case ReferenceKind::Constant: {
            for (long t = 0; t <= T; ++t) ref.points.push_back(base);
            break;
        }
        case ReferenceKind::Ramp: {
            if (params.step.size() != n) {
                throw BadParamsError("generate_reference: ramp step dimension mismatch");
            }
            Vector r = base;
            for (long t = 0; t <= T; ++t) {
                ref.points.push_back(r);
                r += params.step;
            }
            break;
        }
        case ReferenceKind::Waypoints: {
            if (params.waypoints.size() < 2 || params.speed <= 0.0) {
                throw BadParamsError("generate_reference: waypoints need >= 2 vertices and speed > 0");
            }
            for (const auto& wp : params.waypoints) {
                if (wp.size() != n) {
                    throw BadParamsError("generate_reference: waypoint dimension mismatch");
                }
            }
            // walk the polyline at constant per-step arc length, hold at the end
            std::size_t seg = 0;
            double along = 0.0;
            Vector r = params.waypoints.front();
            for (long t = 0; t <= T; ++t) {
                ref.points.push_back(r);
                double remaining = params.speed;
                while (remaining > 0.0 && seg + 1 < params.waypoints.size()) {
                    const Vector dir = params.waypoints[seg + 1] - params.waypoints[seg];
                    const double len = dir.norm();
                    if (along + remaining < len) {
                        along += remaining;
                        remaining = 0.0;
                    } else {
                        remaining -= len - along;
                        along = 0.0;
                        ++seg;
                    }
                }
                if (seg + 1 < params.waypoints.size()) {
                    const Vector dir = params.waypoints[seg + 1] - params.waypoints[seg];
                    r = params.waypoints[seg] + dir * (along / dir.norm());
                } else {
                    r = params.waypoints.back();
                }
            }
            break;
        }
        case ReferenceKind::DecayingRandom: {
            if (params.initial_step < 0.0 || params.decay <= 0.0 || params.decay >= 1.0) {
                throw BadParamsError("generate_reference: decaying_random needs step >= 0, decay in (0,1)");
            }
            Vector r = base;
            double scale = params.initial_step;
            for (long t = 0; t <= T; ++t) {
                ref.points.push_back(r);
                r += scale * random_unit_direction(seed, 0, static_cast<std::uint64_t>(t), n);
                scale *= params.decay;
            }
            break;
        }
    }
    return ref;
}

ReferenceTrajectory scenario_reference(const ScenarioSpec& spec) {
    return generate_reference(spec.reference_kind, spec.reference_params, spec.seed,
                              spec.horizon, spec.system.n());
}

namespace {

// Closed loop of the naive OGD update on z = (v, e); only used to pick a
// stable step size for the variant, nothing else depends on it.
Matrix naive_loop_matrix(const LinearSystem& system, const SynthesizedGains& gains,
                         const CostWeights& weights, double alpha) {
    const auto n = system.n();
    const auto m = system.m();
    Matrix A_naive = Matrix::Zero(m + n, m + n);
    A_naive.topLeftCorner(m, m) =
        Matrix::Identity(m, m) -
        2.0 * alpha * (weights.R + system.B.transpose() * weights.Q * system.B);
    A_naive.topRightCorner(m, n) =
        -2.0 * alpha *
        (system.B.transpose() * weights.Q * gains.F - weights.R * gains.K);
    A_naive.bottomLeftCorner(n, m) = system.B;
    A_naive.bottomRightCorner(n, n) = gains.F;
    return A_naive;
}

double auto_alpha_naive(const LinearSystem& system, const SynthesizedGains& gains,
                        const CostWeights& weights) {
    double best_alpha = 0.0;
    double best_rho = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i) {
        const double alpha = 1e-6 * std::pow(1e6, i / 199.0);  // up to 1.0
        const double rho =
            spectral_radius(naive_loop_matrix(system, gains, weights, alpha));
        if (rho < best_rho) {
            best_rho = rho;
            best_alpha = alpha;
        }
    }
    if (best_rho >= 1.0) {
        throw NoStableStepError("naive OGD: no stable step size found");
    }
    return best_alpha;
}

}  // namespace

SimulationTrace rollout(const ScenarioSpec& spec) {
    const SynthesizedGains gains = synthesize_gains(spec.system, spec.weights);
    const ReferenceTrajectory ref = scenario_reference(spec);
    const DisturbanceSequence dist = reference_to_disturbance(spec.system, ref);
    const long T = spec.horizon;
    const auto n = spec.system.n();
    const auto m = spec.system.m();

    SimulationTrace trace;
    const Vector x0 = spec.x0.value_or(ref.points.front());
    Vector e = x0 - ref.points.front();
    if (!spec.x0.has_value()) e.setZero();  // exact zero initial error by default
    trace.errors.push_back(e);

    const Vector v0 = spec.v0.value_or(Vector::Zero(m));
    if (v0.size() != m) throw DimensionError("rollout: v0 dimension mismatch");

    const bool is_ogd =
        spec.controller == ControllerId::SsOgd || spec.controller == ControllerId::NaiveOgd;
    double alpha = 0.0;
    if (is_ogd) {
        if (spec.alpha.has_value()) {
            alpha = *spec.alpha;
        } else if (spec.controller == ControllerId::SsOgd) {
            alpha = select_step_size(spec.system, gains, spec.weights);
        } else {
            alpha = auto_alpha_naive(spec.system, gains, spec.weights);
        }
        if (spec.controller == ControllerId::SsOgd) {
            const CombinedDynamics cd = build_combined(gains, spec.weights, spec.system, alpha);
            if (!check_step_size(cd)) {
                throw UnstableStepError("rollout: step size violates rho(Atilde) < 1");
            }
        } else {
            if (spectral_radius(naive_loop_matrix(spec.system, gains, spec.weights, alpha)) >=
                1.0) {
                throw UnstableStepError("rollout: naive OGD loop unstable at this step size");
            }
        }
    }
    trace.alpha_used = alpha;

    // precomputed input sequences for the noncausal policies
    std::vector<Vector> fixed_inputs;
    if (spec.controller == ControllerId::Offline) {
        fixed_inputs = offline_noncausal_inputs(spec.system, gains, spec.weights, e, dist).inputs;
    } else if (spec.controller == ControllerId::SsBenchmark) {
        fixed_inputs = steady_state_benchmark_inputs(gains, spec.weights, dist);
    }

    ControllerState state{v0, Vector::Zero(m), 0};
    for (long t = 0; t < T; ++t) {
        const std::size_t ti = static_cast<std::size_t>(t);
        Vector u;
        switch (spec.controller) {
            case ControllerId::SsOgd:
                u = ss_ogd_step(state, gains, spec.weights, alpha, e);
                trace.bias.push_back(state.v);
                break;
            case ControllerId::NaiveOgd:
                u = naive_ogd_step(state, gains, spec.weights, spec.system, alpha, e);
                trace.bias.push_back(state.v);
                break;
            case ControllerId::Ce:
                u = ce_controller_step(gains, spec.weights, spec.system, e, ref.points[ti]);
                break;
            case ControllerId::Offline:
            case ControllerId::SsBenchmark:
                u = fixed_inputs[ti];
                break;
        }
        // only now is r_{t+1} (hence w_t) revealed
        const Vector& w = dist.values[ti];
        trace.costs.push_back(
            online_cost(spec.system, gains, spec.weights, e, u, w, t == T - 1));
        e = spec.system.A * e + spec.system.B * u + w;
        trace.inputs.push_back(u);
        trace.errors.push_back(e);
    }

    trace.states.reserve(trace.errors.size());
    for (std::size_t t = 0; t < trace.errors.size(); ++t) {
        trace.states.push_back(trace.errors[t] + ref.points[t]);
    }
    trace.total_cost = evaluate_cost(gains, spec.weights, trace.errors, trace.inputs);
    return trace;
}

double regret_via_inputs(const SimulationTrace& trace, const LinearSystem& system,
                         const SynthesizedGains& gains, const CostWeights& weights,
                         const DisturbanceSequence& disturbances) {
    if (trace.inputs.size() != disturbances.values.size()) {
        throw DimensionError("regret_via_inputs: horizon mismatch");
    }
    const std::vector<Vector> ff = offline_feedforward(system, gains, weights, disturbances);
    const Matrix G = weights.R + system.B.transpose() * gains.P * system.B;
    double regret = 0.0;
    for (std::size_t t = 0; t < trace.inputs.size(); ++t) {
        const Vector u_star = -gains.K * trace.errors[t] - ff[t];
        const Vector delta = trace.inputs[t] - u_star;
        regret += delta.dot(G * delta);
    }
    return regret;
}

double ss_regret(const SimulationTrace& trace, const LinearSystem& system,
                 const SynthesizedGains& gains, const CostWeights& weights,
                 const DisturbanceSequence& disturbances) {
    const std::vector<Vector> inputs =
        steady_state_benchmark_inputs(gains, weights, disturbances);
    std::vector<Vector> errors;
    errors.reserve(inputs.size() + 1);
    errors.push_back(trace.errors.front());
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        errors.push_back(system.A * errors.back() + system.B * inputs[t] +
                         disturbances.values[t]);
    }
    return trace.total_cost - evaluate_cost(gains, weights, errors, inputs);
}

RegretReport dynamic_regret(const SimulationTrace& trace, const ScenarioSpec& spec) {
    const SynthesizedGains gains = synthesize_gains(spec.system, spec.weights);
    const ReferenceTrajectory ref = scenario_reference(spec);
    const DisturbanceSequence dist = reference_to_disturbance(spec.system, ref);

    RegretReport report;
    const OfflineSolution offline = offline_noncausal_inputs(
        spec.system, gains, spec.weights, trace.errors.front(), dist);
    report.regret = trace.total_cost - offline.cost;
    report.regret_via_inputs =
        regret_via_inputs(trace, spec.system, gains, spec.weights, dist);
    report.ss_regret = ss_regret(trace, spec.system, gains, spec.weights, dist);
    report.path_length = path_length(ref);

    if (spec.controller == ControllerId::SsOgd) {
        const CombinedDynamics cd =
            build_combined(gains, spec.weights, spec.system, trace.alpha_used);
        const Vector v0 = spec.v0.value_or(Vector::Zero(spec.system.m()));
        const RegretBoundConstants constants =
            compute_regret_constants(spec.system, gains, spec.weights, cd, ref.bound(),
                                     trace.states.front().norm(), v0.norm());
        report.theory_bound = regret_upper_bound(constants, report.path_length, spec.horizon);
    } else {
        report.theory_bound = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

std::vector<BatchRow> batch_worst_case_regret(const ScenarioSpec& base_spec,
                                              const std::vector<long>& horizons, int trials,
                                              std::uint64_t seed) {
    if (trials < 1) throw BadParamsError("batch_worst_case_regret: trials must be >= 1");
    std::vector<BatchRow> table;
    table.reserve(horizons.size());
    for (long T : horizons) {
        BatchRow row;
        row.horizon = T;
        double sum = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            ScenarioSpec spec = base_spec;
            spec.horizon = T;
            spec.seed = splitmix64(seed + static_cast<std::uint64_t>(trial));
            const SimulationTrace trace = rollout(spec);
            const RegretReport report = dynamic_regret(trace, spec);
            row.worst_regret = std::max(row.worst_regret, report.regret);
            if (std::isfinite(report.theory_bound)) {
                row.theory_bound = std::max(row.theory_bound, report.theory_bound);
            }
            sum += report.regret;
        }
        row.mean_regret = sum / trials;
        table.push_back(row);
    }
    return table;
}

}  // namespace lqtrack
