#pragma once

#include <vector>

#include "lqtrack/model.hpp"

namespace lqtrack {

/// Interaction order per round t: observe (e_t, r_t), emit u_t, then the
/// environment reveals r_{t+1} (equivalently w_t). Causal controllers see
/// nothing beyond that; the offline controller below is explicitly noncausal.

/// Mutable state of a gradient-based controller: the learned bias v_t, the
/// most recent applied input, and the round index.
struct ControllerState {
    Vector v;
    Vector last_u;
    long step = 0;
};

/// Solution of the per-disturbance steady-state program
///   min_{e,v} ||e||_Q^2 + ||-Ke + v||_R^2  s.t.  e = (A - BK) e + B v + w.
struct SteadyStateSolution {
    Vector e_hat;
    Vector v_hat;
    Vector u_hat;  // -K e_hat + v_hat
};

/// Closed-form stationary solution. Throws SingularProgramError when the
/// program Hessian S'QS + (I-KS)'R(I-KS) is not positive definite.
SteadyStateSolution solve_stepwise_ss(const SynthesizedGains& gains,
                                      const CostWeights& weights, const Vector& w);

/// One SS-OGD round: update the bias against the steady-state gradient
///   v_t = v_{t-1} - 2 alpha ((I-KS)' R u_{t-1} + S' Q e_t)
/// then play u_t = -K e_t + v_t. At t = 0 the update is skipped and v_0 is
/// used as-is.
Vector ss_ogd_step(ControllerState& state, const SynthesizedGains& gains,
                   const CostWeights& weights, double alpha, const Vector& e_t);

/// One naive OGD round: v_t = v_{t-1} - 2 alpha (R u_{t-1} + B' Q e_t),
/// u_t = -K e_t + v_t. Stability of the induced loop is not guaranteed.
Vector naive_ogd_step(ControllerState& state, const SynthesizedGains& gains,
                      const CostWeights& weights, const LinearSystem& system, double alpha,
                      const Vector& e_t);

/// Causal certainty-equivalence round: freeze all future references at r_t,
/// i.e. w_ce = (A - I) r_t, and play measured-error feedback plus the
/// certainty-equivalent feedforward u_t = -K e_t + v_hat(w_ce).
Vector ce_controller_step(const SynthesizedGains& gains, const CostWeights& weights,
                          const LinearSystem& system, const Vector& e_t, const Vector& r_t);

/// Open-loop steady-state benchmark: u_hat_t = -K e_hat_t + v_hat_t from the
/// per-step program at w_t. Sees r_{t+1} at time t by construction.
std::vector<Vector> steady_state_benchmark_inputs(const SynthesizedGains& gains,
                                                  const CostWeights& weights,
                                                  const DisturbanceSequence& disturbances);

struct OfflineSolution {
    std::vector<Vector> inputs;  // u*_0 .. u*_{T-1}
    std::vector<Vector> errors;  // e*_0 .. e*_T
    double cost = 0.0;
};

/// Optimal offline noncausal controller:
///   u*_t = -K e*_t - (R + B'PB)^{-1} B' g_t,   g_t = P w_t + F' g_{t+1},
/// the feedforward summing ((A-BK)')^{i-t} P w_i over the remaining horizon.
OfflineSolution offline_noncausal_inputs(const LinearSystem& system,
                                         const SynthesizedGains& gains,
                                         const CostWeights& weights, const Vector& e0,
                                         const DisturbanceSequence& disturbances);

/// Feedforward terms f_t = (R + B'PB)^{-1} B' g_t of the offline controller;
/// the optimal input at any state e is -K e - f_t. Shared by the offline
/// rollout and the input-space regret formula.
std::vector<Vector> offline_feedforward(const LinearSystem& system,
                                        const SynthesizedGains& gains,
                                        const CostWeights& weights,
                                        const DisturbanceSequence& disturbances);

}  // namespace lqtrack
