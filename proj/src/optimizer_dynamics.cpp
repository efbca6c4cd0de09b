#include "lqtrack/optimizer_dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <complex>

namespace lqtrack {

namespace {

double complex_spectral_norm(const Eigen::MatrixXcd& W) {
    return W.jacobiSvd().singularValues()(0);
}

// ||(e^{jw} I - G)^{-1}|| at a single frequency, +inf when singular.
double resolvent_norm(const Matrix& G, double w) {
    const auto n = G.rows();
    Eigen::MatrixXcd Z =
        std::polar(1.0, w) * Eigen::MatrixXcd::Identity(n, n) - G.cast<std::complex<double>>();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(Z);
    if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
    return complex_spectral_norm(lu.inverse());
}

}  // namespace

CombinedDynamics build_combined(const SynthesizedGains& gains, const CostWeights& weights,
                                const LinearSystem& system, double alpha) {
    const auto n = system.n();
    const auto m = system.m();
    CombinedDynamics cd;
    cd.n = n;
    cd.m = m;
    cd.alpha = alpha;

    const Matrix IKS = Matrix::Identity(m, m) - gains.K * gains.S;
    cd.M = 2.0 * (gains.S.transpose() * weights.Q * system.B + IKS.transpose() * weights.R);
    cd.H = 2.0 * (gains.S.transpose() * weights.Q * gains.F -
                  IKS.transpose() * weights.R * gains.K);
    cd.Mbar = 2.0 * (gains.S.transpose() * weights.Q * gains.S +
                     IKS.transpose() * weights.R * IKS);

    const auto p = m + n;
    cd.Atilde = Matrix::Zero(p, p);
    cd.Atilde.topLeftCorner(m, m) = Matrix::Identity(m, m) - alpha * cd.M;
    cd.Atilde.topRightCorner(m, n) = -alpha * cd.H;
    cd.Atilde.bottomLeftCorner(n, m) = system.B;
    cd.Atilde.bottomRightCorner(n, n) = gains.F;

    cd.Btilde = Matrix::Zero(p, n);
    cd.Btilde.topRows(m) = -2.0 * alpha * gains.S.transpose() * weights.Q;
    cd.Btilde.bottomRows(n) = Matrix::Identity(n, n);

    cd.Qtilde = Matrix::Zero(p, p);
    cd.Qtilde.topLeftCorner(m, m) = weights.R;
    cd.Qtilde.topRightCorner(m, n) = -weights.R * gains.K;
    cd.Qtilde.bottomLeftCorner(n, m) = -gains.K.transpose() * weights.R;
    cd.Qtilde.bottomRightCorner(n, n) =
        weights.Q + gains.K.transpose() * weights.R * gains.K;

    cd.QtildeT = Matrix::Zero(p, p);
    cd.QtildeT.bottomRightCorner(n, n) = gains.P;

    cd.V = Matrix::Identity(p, p);
    cd.V.bottomLeftCorner(n, m) = -gains.S;
    return cd;
}

bool check_step_size(const CombinedDynamics& cd, const NumericTolerances& tol) {
    return spectral_radius(cd.Atilde) < 1.0 - tol.stability_margin;
}

bool sufficient_condition(const CombinedDynamics& cd, const LinearSystem& system,
                          const SynthesizedGains& gains) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (cd.Mbar + cd.Mbar.transpose()));
    const double lambda_min = es.eigenvalues().minCoeff();
    if (lambda_min <= 0.0) {
        throw SingularProgramError("sufficient_condition: Mbar not positive definite");
    }
    if (cd.alpha >= 2.0 / spectral_radius(cd.Mbar)) return false;

    const Matrix G = cd.alpha * gains.S * cd.H + gains.F;
    const double gain = cd.alpha * spectral_norm(gains.S * cd.Mbar) * spectral_norm(cd.H) /
                        lambda_min;

    // dense grid then golden-section refinement around the argmax
    constexpr int kGrid = 2048;
    const double two_pi = 2.0 * M_PI;
    double best_w = 0.0;
    double best = -1.0;
    for (int i = 0; i < kGrid; ++i) {
        const double w = two_pi * i / kGrid;
        const double v = resolvent_norm(G, w);
        if (v > best) {
            best = v;
            best_w = w;
        }
    }
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = best_w - two_pi / kGrid;
    double b = best_w + two_pi / kGrid;
    double x1 = b - golden * (b - a);
    double x2 = a + golden * (b - a);
    double f1 = resolvent_norm(G, x1);
    double f2 = resolvent_norm(G, x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {  // maximize
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + golden * (b - a);
            f2 = resolvent_norm(G, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - golden * (b - a);
            f1 = resolvent_norm(G, x1);
        }
    }
    best = std::max({best, f1, f2});
    return gain * best < 1.0;
}

double select_step_size(const LinearSystem& system, const SynthesizedGains& gains,
                        const CostWeights& weights) {
    const CombinedDynamics probe = build_combined(gains, weights, system, 0.0);
    const double alpha_max = 2.0 / spectral_radius(probe.Mbar);

    const auto radius_at = [&](double alpha) {
        return spectral_radius(build_combined(gains, weights, system, alpha).Atilde);
    };

    constexpr int kGrid = 200;
    const double lo = 1e-6;
    double best_alpha = lo;
    double best_rho = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        const double alpha =
            lo * std::pow(alpha_max * (1.0 - 1e-12) / lo, static_cast<double>(i) / (kGrid - 1));
        const double rho = radius_at(alpha);
        if (rho < best_rho) {
            best_rho = rho;
            best_alpha = alpha;
        }
    }
    if (best_rho >= 1.0) {
        throw NoStableStepError("select_step_size: no stable step on the grid");
    }

    // ternary refinement in the log-grid bracket around the best point
    double a = best_alpha / std::pow(alpha_max / lo, 1.0 / (kGrid - 1));
    double b = std::min(alpha_max * (1.0 - 1e-12),
                        best_alpha * std::pow(alpha_max / lo, 1.0 / (kGrid - 1)));
    for (int it = 0; it < 80; ++it) {
        const double x1 = a + (b - a) / 3.0;
        const double x2 = b - (b - a) / 3.0;
        if (radius_at(x1) <= radius_at(x2)) {
            b = x2;
        } else {
            a = x1;
        }
    }
    const double refined = 0.5 * (a + b);
    if (radius_at(refined) < best_rho) best_alpha = refined;

    const CombinedDynamics cd = build_combined(gains, weights, system, best_alpha);
    if (!check_step_size(cd)) {
        throw NoStableStepError("select_step_size: refined step not stable");
    }
    return best_alpha;
}

std::pair<Vector, Vector> steady_state_z(const CombinedDynamics& cd, const Vector& w_bar) {
    const auto p = cd.m + cd.n;
    const Matrix lhs = Matrix::Identity(p, p) - cd.Atilde;
    const Vector z_hat = linear_solve(lhs, cd.Btilde * w_bar);
    return {z_hat.head(cd.m), z_hat.tail(cd.n)};
}

RegretBoundConstants compute_regret_constants(const LinearSystem& system,
                                              const SynthesizedGains& gains,
                                              const CostWeights& weights,
                                              const CombinedDynamics& cd, double Rbar,
                                              double x0_norm, double v0_norm) {
    RegretBoundConstants k;
    const Matrix G = weights.R + system.B.transpose() * gains.P * system.B;
    k.d = spectral_norm(linear_solve(G, system.B.transpose())) * spectral_norm(gains.P);
    const DecayEnvelope envF = decay_envelope(gains.F);
    k.c_F = envF.c;
    k.lambda_F = envF.lambda;
    const DecayEnvelope envA = decay_envelope(cd.Atilde);
    k.c_At = envA.c;
    k.lambda_At = envA.lambda;

    const auto p = cd.m + cd.n;
    const Matrix sens = linear_solve(Matrix::Identity(p, p) - cd.Atilde, cd.Btilde);
    k.norm_A = spectral_norm(system.A);
    k.Rbar = Rbar;
    k.h = spectral_norm(sens) * (k.norm_A + 1.0);
    k.b = (k.h + 1.0) * Rbar + x0_norm + v0_norm;
    k.eps_bar = k.c_At * (k.b + 2.0 * Rbar * k.h / (1.0 - k.lambda_At));
    k.Pbar = 4.0 * spectral_norm(G);
    k.s2_max = 2.0 * k.c_F * k.d * (k.norm_A + 1.0) * Rbar / ((1.0 - k.lambda_F) * (1.0 - k.lambda_F));
    k.s3_max = k.c_F * k.d * (k.norm_A + 1.0) * Rbar / (1.0 - k.lambda_F);
    return k;
}

double regret_upper_bound(const RegretBoundConstants& k, double L, long T) {
    const double sum_s1 = k.c_At / (1.0 - k.lambda_At) * (k.b + k.h * L);
    const double sum_s2 =
        k.c_F * k.d * (k.norm_A + 1.0) / ((1.0 - k.lambda_F) * (1.0 - k.lambda_F)) * L;
    const double sum_s3 = k.c_F * k.d * (k.norm_A + 1.0) * k.Rbar *
                          (1.0 - std::pow(k.lambda_F, static_cast<double>(T))) /
                          ((1.0 - k.lambda_F) * (1.0 - k.lambda_F));
    return k.Pbar * (k.eps_bar * sum_s1 + k.s2_max * sum_s2 + k.s3_max * sum_s3);
}

}  // namespace lqtrack
