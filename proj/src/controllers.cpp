#include "lqtrack/controllers.hpp"

#include <Eigen/Cholesky>

namespace lqtrack {

SteadyStateSolution solve_stepwise_ss(const SynthesizedGains& gains,
                                      const CostWeights& weights, const Vector& w) {
    const auto m = gains.K.rows();
    const auto n = gains.K.cols();
    if (w.size() != n) {
        throw DimensionError("solve_stepwise_ss: disturbance dimension mismatch");
    }
    const Matrix IKS = Matrix::Identity(m, m) - gains.K * gains.S;
    const Matrix hessian = gains.S.transpose() * weights.Q * gains.S +
                           IKS.transpose() * weights.R * IKS;
    Eigen::LDLT<Matrix> ldlt(hessian);
    if (ldlt.info() != Eigen::Success || !is_symmetric_pd(hessian)) {
        throw SingularProgramError("solve_stepwise_ss: program is not strictly convex");
    }
    const Matrix rhs_map = IKS.transpose() * weights.R * gains.K * gains.Shat -
                           gains.S.transpose() * weights.Q * gains.Shat;

    SteadyStateSolution sol;
    sol.v_hat = ldlt.solve(rhs_map * w);
    sol.e_hat = gains.S * sol.v_hat + gains.Shat * w;
    sol.u_hat = -gains.K * sol.e_hat + sol.v_hat;
    return sol;
}

Vector ss_ogd_step(ControllerState& state, const SynthesizedGains& gains,
                   const CostWeights& weights, double alpha, const Vector& e_t) {
    const auto m = gains.K.rows();
    if (e_t.size() != gains.K.cols() || state.v.size() != m) {
        throw DimensionError("ss_ogd_step: dimension mismatch");
    }
    if (state.step > 0) {
        const Matrix IKS = Matrix::Identity(m, m) - gains.K * gains.S;
        state.v -= 2.0 * alpha *
                   (IKS.transpose() * (weights.R * state.last_u) +
                    gains.S.transpose() * (weights.Q * e_t));
    }
    const Vector u = -gains.K * e_t + state.v;
    state.last_u = u;
    ++state.step;
    return u;
}

Vector naive_ogd_step(ControllerState& state, const SynthesizedGains& gains,
                      const CostWeights& weights, const LinearSystem& system, double alpha,
                      const Vector& e_t) {
    if (e_t.size() != gains.K.cols() || state.v.size() != gains.K.rows()) {
        throw DimensionError("naive_ogd_step: dimension mismatch");
    }
    if (state.step > 0) {
        state.v -= 2.0 * alpha *
                   (weights.R * state.last_u + system.B.transpose() * (weights.Q * e_t));
    }
    const Vector u = -gains.K * e_t + state.v;
    state.last_u = u;
    ++state.step;
    return u;
}

Vector ce_controller_step(const SynthesizedGains& gains, const CostWeights& weights,
                          const LinearSystem& system, const Vector& e_t, const Vector& r_t) {
    const Vector w_ce = (system.A - Matrix::Identity(system.n(), system.n())) * r_t;
    const SteadyStateSolution sol = solve_stepwise_ss(gains, weights, w_ce);
    return -gains.K * e_t + sol.v_hat;
}

std::vector<Vector> steady_state_benchmark_inputs(const SynthesizedGains& gains,
                                                  const CostWeights& weights,
                                                  const DisturbanceSequence& disturbances) {
    std::vector<Vector> inputs;
    inputs.reserve(disturbances.values.size());
    for (const auto& w : disturbances.values) {
        inputs.push_back(solve_stepwise_ss(gains, weights, w).u_hat);
    }
    return inputs;
}

std::vector<Vector> offline_feedforward(const LinearSystem& system,
                                        const SynthesizedGains& gains,
                                        const CostWeights& weights,
                                        const DisturbanceSequence& disturbances) {
    const auto T = static_cast<long>(disturbances.values.size());
    const Matrix G = weights.R + system.B.transpose() * gains.P * system.B;
    Eigen::LDLT<Matrix> ldlt(G);

    // g_t = P w_t + F' g_{t+1}, accumulated right-to-left
    std::vector<Vector> ff(static_cast<std::size_t>(T));
    Vector g = Vector::Zero(system.n());
    for (long t = T - 1; t >= 0; --t) {
        g = gains.P * disturbances.values[static_cast<std::size_t>(t)] +
            gains.F.transpose() * g;
        ff[static_cast<std::size_t>(t)] = ldlt.solve(system.B.transpose() * g);
    }
    return ff;
}

OfflineSolution offline_noncausal_inputs(const LinearSystem& system,
                                         const SynthesizedGains& gains,
                                         const CostWeights& weights, const Vector& e0,
                                         const DisturbanceSequence& disturbances) {
    const auto T = disturbances.values.size();
    if (T < 1) {
        throw DimensionError("offline_noncausal_inputs: empty horizon");
    }
    const std::vector<Vector> ff = offline_feedforward(system, gains, weights, disturbances);

    OfflineSolution sol;
    sol.inputs.reserve(T);
    sol.errors.reserve(T + 1);
    sol.errors.push_back(e0);
    for (std::size_t t = 0; t < T; ++t) {
        const Vector u = -gains.K * sol.errors.back() - ff[t];
        sol.errors.push_back(system.A * sol.errors.back() + system.B * u +
                             disturbances.values[t]);
        sol.inputs.push_back(u);
    }
    sol.cost = evaluate_cost(gains, weights, sol.errors, sol.inputs);
    return sol;
}

}  // namespace lqtrack
