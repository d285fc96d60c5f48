// Dense linear-algebra helpers: GMRES, condition estimation, Gram solves.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "ssie/types.hpp"

namespace ssie {

/// Solve the SPD real Gram system for a complex right-hand side / matrix.
VecC spd_solve(const Eigen::LLT<MatX>& llt, const VecC& b);
MatC spd_solve(const Eigen::LLT<MatX>& llt, const MatC& B);

struct GmresResult {
    VecC x;
    int iterations = 0;
    double residual = 0.0;   // relative ||Ax-b|| / ||b||
    bool converged = false;
};

/// Full (unrestarted) GMRES with modified Gram-Schmidt Arnoldi and Givens
/// rotations; maxit caps the Krylov dimension.
GmresResult gmres(const MatC& A, const VecC& b, double tol, int maxit);

/// 1-norm condition estimate  ||A||_1 * est(||A^-1||_1)  using a power-type
/// estimator on the factorized inverse (a handful of solves).
double condest_1norm(const MatC& A, const Eigen::PartialPivLU<MatC>& lu);

/// Exact 2-norm condition number via SVD (intended for n <= 2000).
double exact_cond2(const MatC& A);

/// Condition estimate dispatch: exact SVD up to n = 2000, 1-norm estimate
/// beyond.
double condition_estimate(const MatC& A);

} // namespace ssie
