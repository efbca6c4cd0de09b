#pragma once

#include <vector>

#include "lqtrack/numerics.hpp"

namespace lqtrack {

/// Known discrete-time LTI plant x_{t+1} = A x_t + B u_t.
struct LinearSystem {
    Matrix A;
    Matrix B;

    LinearSystem() = default;  // empty placeholder; fill before use
    LinearSystem(Matrix A_, Matrix B_);

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }
};

/// Quadratic stage weights; Q must be symmetric PSD, R symmetric PD.
struct CostWeights {
    Matrix Q;
    Matrix R;

    CostWeights() = default;  // empty placeholder; fill before use
    CostWeights(Matrix Q_, Matrix R_);
};

/// LQR synthesis products used everywhere downstream:
///   P  DARE solution,          K = (R + B'PB)^{-1} B'PA,
///   F  = A - BK (stable),      Shat = (I - A + BK)^{-1},  S = Shat B.
struct SynthesizedGains {
    Matrix P;
    Matrix K;
    Matrix F;
    Matrix S;
    Matrix Shat;
};

/// Reference signal r_0..r_T; the bound on ||r_t|| is measured, not assumed.
struct ReferenceTrajectory {
    std::vector<Vector> points;

    Eigen::Index horizon() const { return static_cast<Eigen::Index>(points.size()) - 1; }
    double bound() const;  // max_t ||r_t||
};

/// Artificial disturbances w_t = A r_t - r_{t+1} driving the error dynamics
/// e_{t+1} = A e_t + B u_t + w_t.
struct DisturbanceSequence {
    std::vector<Vector> values;
};

SynthesizedGains synthesize_gains(const LinearSystem& system, const CostWeights& weights,
                                  const NumericTolerances& tol = default_tolerances());

DisturbanceSequence reference_to_disturbance(const LinearSystem& system,
                                             const ReferenceTrajectory& ref);

/// L(T) = sum_t ||r_{t+1} - r_t||.
double path_length(const ReferenceTrajectory& ref);

/// J(e_0, u) = ||e_T||_P^2 + sum_{t<T} (||e_t||_Q^2 + ||u_t||_R^2).
double evaluate_cost(const SynthesizedGains& gains, const CostWeights& weights,
                     const std::vector<Vector>& errors, const std::vector<Vector>& inputs);

/// Per-round online cost c_t = ||A e + B u + w||_Q^2 + ||u||_R^2, with Q
/// replaced by P on the last round.
double online_cost(const LinearSystem& system, const SynthesizedGains& gains,
                   const CostWeights& weights, const Vector& e, const Vector& u,
                   const Vector& w, bool is_last);

double quad_form(const Matrix& W, const Vector& x);

}  // namespace lqtrack
