#include "lqtrack/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace lqtrack {

const NumericTolerances& default_tolerances() {
    static const NumericTolerances tol{};
    return tol;
}

void require_finite(const Matrix& M, const char* what) {
    if (!M.allFinite()) {
        throw Error(std::string(what) + ": non-finite entries");
    }
}

double spectral_norm(const Matrix& W) {
    if (W.size() == 0) return 0.0;
    return W.jacobiSvd().singularValues()(0);
}

double spectral_radius(const Matrix& W) {
    if (W.rows() != W.cols()) {
        throw DimensionError("spectral_radius: matrix not square");
    }
    Eigen::EigenSolver<Matrix> es(W, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw EigenFailureError("spectral_radius: eigenvalue iteration failed");
    }
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_symmetric_psd(const Matrix& M, double tol) {
    if (M.rows() != M.cols()) return false;
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > tol * (1.0 + M.cwiseAbs().maxCoeff()))
        return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(M);
    return es.info() == Eigen::Success &&
           es.eigenvalues().minCoeff() >= -tol * (1.0 + std::abs(es.eigenvalues().maxCoeff()));
}

bool is_symmetric_pd(const Matrix& M, double tol) {
    if (M.rows() != M.cols()) return false;
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + M.cwiseAbs().maxCoeff()))
        return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(M);
    return es.info() == Eigen::Success && es.eigenvalues().minCoeff() > tol;
}

double dare_residual(const Matrix& P, const Matrix& A, const Matrix& B, const Matrix& Q,
                     const Matrix& R) {
    const Matrix BtPB = R + B.transpose() * P * B;
    const Matrix AtPB = A.transpose() * P * B;
    const Matrix next =
        Q + A.transpose() * P * A - AtPB * BtPB.ldlt().solve(AtPB.transpose());
    return spectral_norm(P - next) / (1.0 + spectral_norm(P));
}

Matrix solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                  const NumericTolerances& tol) {
    const auto n = A.rows();
    if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
        R.rows() != B.cols() || R.cols() != B.cols()) {
        throw DimensionError("solve_dare: inconsistent dimensions");
    }
    require_finite(A, "solve_dare A");
    require_finite(B, "solve_dare B");

    Matrix P = Q;
    double rel_change = std::numeric_limits<double>::infinity();
    for (long it = 0; it < tol.dare_max_iter; ++it) {
        const Matrix G = R + B.transpose() * P * B;
        Eigen::LDLT<Matrix> ldlt(G);
        if (ldlt.info() != Eigen::Success) {
            throw IllConditionedError("solve_dare: R + B'PB solve failed");
        }
        const Matrix AtPB = A.transpose() * P * B;
        Matrix next = Q + A.transpose() * P * A - AtPB * ldlt.solve(AtPB.transpose());
        next = 0.5 * (next + next.transpose());  // keep symmetric
        if (!next.allFinite()) {
            throw NonConvergentError("solve_dare: iteration diverged");
        }
        rel_change = (next - P).cwiseAbs().maxCoeff() / (1.0 + next.cwiseAbs().maxCoeff());
        P = next;
        if (rel_change <= tol.dare_rel_change) break;
    }
    if (rel_change > tol.dare_rel_change) {
        throw NonConvergentError("solve_dare: no contraction within iteration cap");
    }
    if (dare_residual(P, A, B, Q, R) > tol.dare_residual) {
        throw NonConvergentError("solve_dare: residual check failed");
    }
    return P;
}

DecayEnvelope decay_envelope(const Matrix& W, const NumericTolerances& tol) {
    const double rho = spectral_radius(W);
    if (rho >= 1.0) {
        throw UnstableError("decay_envelope: rho(W) >= 1");
    }
    const double lambda = 0.5 * (1.0 + rho);

    Matrix Wk = W;
    double lambda_k = lambda;
    double c = 0.0;
    double prev_ratio = std::numeric_limits<double>::infinity();
    bool settled = false;
    for (int k = 1; k <= tol.envelope_scan_cap; ++k) {
        const double ratio = spectral_norm(Wk) / lambda_k;
        c = std::max(c, ratio);
        if (ratio < prev_ratio &&
            ratio <= c * std::numeric_limits<double>::epsilon()) {
            settled = true;
            break;
        }
        prev_ratio = ratio;
        Wk = Wk * W;
        lambda_k *= lambda;
    }
    if (!settled) {
        throw NonConvergentError("decay_envelope: ratio not decreasing within scan cap");
    }

    // certificate re-check over the scanned prefix
    Wk = W;
    lambda_k = lambda;
    for (int k = 1; k <= 64; ++k) {
        if (spectral_norm(Wk) > c * lambda_k * (1.0 + 1e-12)) {
            throw NonConvergentError("decay_envelope: certificate check failed");
        }
        Wk = Wk * W;
        lambda_k *= lambda;
    }
    return {lambda, c};
}

Matrix linear_solve(const Matrix& M, const Matrix& rhs, const NumericTolerances& tol) {
    if (M.rows() != M.cols() || M.rows() != rhs.rows()) {
        throw DimensionError("linear_solve: inconsistent dimensions");
    }
    Eigen::FullPivLU<Matrix> lu(M);
    if (!lu.isInvertible()) {
        throw SingularError("linear_solve: matrix is singular");
    }
    Matrix X = lu.solve(rhs);
    if (spectral_norm(M * X - rhs) > tol.solve_residual * (1.0 + spectral_norm(rhs))) {
        throw SingularError("linear_solve: residual too large");
    }
    return X;
}

}  // namespace lqtrack
