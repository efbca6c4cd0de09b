#pragma once

#include <Eigen/Dense>

#include "lqtrack/errors.hpp"

namespace lqtrack {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Centralized numeric tolerances. Defaults are the ones used by the whole
/// library; individual call sites never hard-code their own.
struct NumericTolerances {
    double dare_rel_change = 1e-13;   // DARE fixed-point stop criterion
    long dare_max_iter = 100000;      // DARE iteration cap
    double dare_residual = 1e-10;     // accepted relative DARE residual
    double stability_margin = 1e-9;   // rho(W) < 1 - margin counts as stable
    int envelope_scan_cap = 10000;    // decay_envelope prefix scan cap
    double solve_residual = 1e-10;    // accepted linear solve residual
};

const NumericTolerances& default_tolerances();

/// Geometric decay certificate for a Schur-stable matrix W:
/// ||W^k|| <= c * lambda^k for all k >= 1, with lambda = (1 + rho(W)) / 2.
struct DecayEnvelope {
    double lambda;  // in (0, 1)
    double c;       // positive
};

/// Spectral norm (largest singular value).
double spectral_norm(const Matrix& W);

/// Largest eigenvalue modulus of a square matrix.
double spectral_radius(const Matrix& W);

/// Stabilizing solution of
///   P = Q + A'PA - A'PB (R + B'PB)^{-1} B'PA
/// by fixed-point iteration from P0 = Q. Throws NonConvergentError when the
/// iteration does not settle within the cap or the residual check fails
/// (in practice: Assumption-type violations of stabilisability/detectability),
/// IllConditionedError when the inner (R + B'PB) solve breaks down.
Matrix solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                  const NumericTolerances& tol = default_tolerances());

/// Relative residual of a candidate DARE solution; exposed for tests.
double dare_residual(const Matrix& P, const Matrix& A, const Matrix& B, const Matrix& Q,
                     const Matrix& R);

/// Minimal certified decay envelope for W with rho(W) < 1. The ratio
/// ||W^k|| / lambda^k tends to zero, so its maximum over a finite prefix is
/// the global maximum; the scan stops once the ratio has dropped below
/// machine tolerance of the running max while decreasing.
DecayEnvelope decay_envelope(const Matrix& W,
                             const NumericTolerances& tol = default_tolerances());

/// X with M X = rhs, via full-pivot LU. Throws SingularError.
Matrix linear_solve(const Matrix& M, const Matrix& rhs,
                    const NumericTolerances& tol = default_tolerances());

/// Throws Error when any entry is not finite.
void require_finite(const Matrix& M, const char* what);

bool is_symmetric_psd(const Matrix& M, double tol = 1e-9);
bool is_symmetric_pd(const Matrix& M, double tol = 1e-12);

}  // namespace lqtrack
