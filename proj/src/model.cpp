#include "lqtrack/model.hpp"

namespace lqtrack {

LinearSystem::LinearSystem(Matrix A_, Matrix B_) : A(std::move(A_)), B(std::move(B_)) {
    if (A.rows() != A.cols() || B.rows() != A.rows() || B.cols() < 1) {
        throw DimensionError("LinearSystem: inconsistent A/B dimensions");
    }
    require_finite(A, "LinearSystem A");
    require_finite(B, "LinearSystem B");
}

CostWeights::CostWeights(Matrix Q_, Matrix R_) : Q(std::move(Q_)), R(std::move(R_)) {
    if (!is_symmetric_psd(Q)) {
        throw Error("CostWeights: Q must be symmetric positive semidefinite");
    }
    if (!is_symmetric_pd(R)) {
        throw Error("CostWeights: R must be symmetric positive definite");
    }
}

double ReferenceTrajectory::bound() const {
    double rbar = 0.0;
    for (const auto& r : points) rbar = std::max(rbar, r.norm());
    return rbar;
}

SynthesizedGains synthesize_gains(const LinearSystem& system, const CostWeights& weights,
                                  const NumericTolerances& tol) {
    const Matrix& A = system.A;
    const Matrix& B = system.B;
    if (weights.Q.rows() != system.n() || weights.R.rows() != system.m()) {
        throw DimensionError("synthesize_gains: weight dimensions do not match system");
    }

    SynthesizedGains g;
    g.P = solve_dare(A, B, weights.Q, weights.R, tol);
    const Matrix G = weights.R + B.transpose() * g.P * B;
    g.K = linear_solve(G, B.transpose() * g.P * A, tol);
    g.F = A - B * g.K;
    if (spectral_radius(g.F) >= 1.0 - tol.stability_margin) {
        throw NonConvergentError("synthesize_gains: closed loop not stable; check stabilizability/detectability");
    }
    const Matrix I = Matrix::Identity(system.n(), system.n());
    g.Shat = linear_solve(I - g.F, I, tol);
    g.S = g.Shat * B;
    return g;
}

DisturbanceSequence reference_to_disturbance(const LinearSystem& system,
                                             const ReferenceTrajectory& ref) {
    if (ref.horizon() < 1) {
        throw DimensionError("reference_to_disturbance: need at least two points");
    }
    DisturbanceSequence w;
    w.values.reserve(ref.points.size() - 1);
    for (std::size_t t = 0; t + 1 < ref.points.size(); ++t) {
        if (ref.points[t].size() != system.n()) {
            throw DimensionError("reference_to_disturbance: reference dimension mismatch");
        }
        w.values.push_back(system.A * ref.points[t] - ref.points[t + 1]);
    }
    return w;
}

double path_length(const ReferenceTrajectory& ref) {
    double L = 0.0;
    for (std::size_t t = 0; t + 1 < ref.points.size(); ++t) {
        L += (ref.points[t + 1] - ref.points[t]).norm();
    }
    return L;
}

double quad_form(const Matrix& W, const Vector& x) {
    if (W.rows() != x.size() || W.cols() != x.size()) {
        throw DimensionError("quad_form: dimension mismatch");
    }
    return x.dot(W * x);
}

double evaluate_cost(const SynthesizedGains& gains, const CostWeights& weights,
                     const std::vector<Vector>& errors, const std::vector<Vector>& inputs) {
    if (errors.size() != inputs.size() + 1) {
        throw DimensionError("evaluate_cost: need T+1 errors for T inputs");
    }
    double J = quad_form(gains.P, errors.back());
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        J += quad_form(weights.Q, errors[t]) + quad_form(weights.R, inputs[t]);
    }
    return J;
}

double online_cost(const LinearSystem& system, const SynthesizedGains& gains,
                   const CostWeights& weights, const Vector& e, const Vector& u,
                   const Vector& w, bool is_last) {
    const Vector next = system.A * e + system.B * u + w;
    const Matrix& state_weight = is_last ? gains.P : weights.Q;
    return quad_form(state_weight, next) + quad_form(weights.R, u);
}

}  // namespace lqtrack
