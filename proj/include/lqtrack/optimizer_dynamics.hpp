#pragma once

#include "lqtrack/model.hpp"

namespace lqtrack {

/// Combined system-optimizer dynamics on z = (v, e):
///   z_{t+1} = Atilde z_t + Btilde w_t,
///   Atilde = [ I - alpha M   -alpha H ]     Btilde = [ -2 alpha S'Q ]
///            [ B              A - BK  ]              [  I           ]
/// with M = 2 (S'QB + (I-KS)'R) and H = 2 (S'Q(A-BK) - (I-KS)'RK).
struct CombinedDynamics {
    Matrix Atilde;   // p x p, p = m + n
    Matrix Btilde;   // p x n
    Matrix M;        // m x m
    Matrix H;        // m x n
    Matrix Mbar;     // m x m, = M + H S = 2 (S'QS + (I-KS)'R(I-KS))
    Matrix Qtilde;   // p x p stage weight on z
    Matrix QtildeT;  // p x p terminal weight (P block only)
    Matrix V;        // p x p coordinate transform [[I, 0], [-S, I]]
    double alpha = 0.0;
    Eigen::Index n = 0;
    Eigen::Index m = 0;
};

CombinedDynamics build_combined(const SynthesizedGains& gains, const CostWeights& weights,
                                const LinearSystem& system, double alpha);

/// True iff rho(Atilde) < 1 - margin (the step-size admissibility condition).
bool check_step_size(const CombinedDynamics& cd,
                     const NumericTolerances& tol = default_tolerances());

/// Small-gain sufficient condition for stability of the combined dynamics:
///   alpha < 2 / rho(Mbar)  and
///   alpha * ||S Mbar|| ||H|| / lambda_min(Mbar)
///         * max_w ||(e^{jw} I - alpha S H - (A-BK))^{-1}|| < 1.
/// The frequency maximum is taken over a 2048-point grid on [0, 2pi) with
/// golden-section refinement around the grid argmax. Conservative by
/// construction: true implies check_step_size.
bool sufficient_condition(const CombinedDynamics& cd, const LinearSystem& system,
                          const SynthesizedGains& gains);

/// Step size minimizing rho(Atilde(alpha)) over a 200-point logarithmic grid
/// in [1e-6, 2/rho(Mbar)), refined by ternary search. Throws NoStableStepError
/// when no grid point is stable.
double select_step_size(const LinearSystem& system, const SynthesizedGains& gains,
                        const CostWeights& weights);

/// Fixed point (v_hat, e_hat) of the combined dynamics for a constant w_bar:
/// the (m, n) blocks of (I - Atilde)^{-1} Btilde w_bar.
std::pair<Vector, Vector> steady_state_z(const CombinedDynamics& cd, const Vector& w_bar);

/// Constants feeding the explicit path-length regret bound.
struct RegretBoundConstants {
    double d = 0;           // ||(R+B'PB)^{-1} B'|| * ||P||
    double c_F = 0, lambda_F = 0;
    double c_At = 0, lambda_At = 0;
    double h = 0;           // ||(I - Atilde)^{-1} Btilde|| * (||A|| + 1)
    double b = 0;           // (h+1) Rbar + ||x_0|| + ||v_0||
    double eps_bar = 0;     // c_At (b + 2 Rbar h / (1 - lambda_At))
    double Pbar = 0;        // 4 ||R + B'PB||
    double s2_max = 0;      // 2 c_F d (||A||+1) Rbar / (1 - lambda_F)^2
    double s3_max = 0;      // c_F d (||A||+1) Rbar / (1 - lambda_F)
    double norm_A = 0;
    double Rbar = 0;
};

RegretBoundConstants compute_regret_constants(const LinearSystem& system,
                                              const SynthesizedGains& gains,
                                              const CostWeights& weights,
                                              const CombinedDynamics& cd, double Rbar,
                                              double x0_norm, double v0_norm);

/// Explicit upper bound on the dynamic regret of SS-OGD for path length L and
/// horizon T, combining the per-term sum bounds with the per-step maxima via
/// sum s^2 <= (max s)(sum s).
double regret_upper_bound(const RegretBoundConstants& k, double L, long T);

}  // namespace lqtrack
