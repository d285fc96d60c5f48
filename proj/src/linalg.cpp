#include "ssie/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/SVD>

namespace ssie {

VecC spd_solve(const Eigen::LLT<MatX>& llt, const VecC& b) {
    VecC x(b.size());
    x.real() = llt.solve(VecX(b.real()));
    x.imag() = llt.solve(VecX(b.imag()));
    return x;
}

MatC spd_solve(const Eigen::LLT<MatX>& llt, const MatC& B) {
    MatC X(B.rows(), B.cols());
    X.real() = llt.solve(MatX(B.real()));
    X.imag() = llt.solve(MatX(B.imag()));
    return X;
}

GmresResult gmres(const MatC& A, const VecC& b, double tol, int maxit) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || b.size() != n) throw std::invalid_argument("gmres: shape mismatch");
    GmresResult out;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        out.x = VecC::Zero(n);
        out.converged = true;
        return out;
    }
    maxit = std::min<int>(maxit, static_cast<int>(n));

    MatC V(n, maxit + 1);             // Arnoldi basis
    MatC H = MatC::Zero(maxit + 1, maxit);
    VecC g = VecC::Zero(maxit + 1);   // rotated residual vector
    std::vector<cd> cs(maxit), sn(maxit);

    V.col(0) = b / bnorm;
    g(0) = bnorm;
    int k = 0;
    for (; k < maxit; ++k) {
        VecC w = A * V.col(k);
        for (Eigen::Index j = 0; j <= k; ++j) {
            H(j, k) = V.col(j).dot(w); // conjugated inner product
            w -= H(j, k) * V.col(j);
        }
        H(k + 1, k) = w.norm();
        if (std::abs(H(k + 1, k)) > 0) V.col(k + 1) = w / H(k + 1, k);
        // apply accumulated Givens rotations to the new column
        for (int j = 0; j < k; ++j) {
            const cd t = cs[j] * H(j, k) + sn[j] * H(j + 1, k);
            H(j + 1, k) = -std::conj(sn[j]) * H(j, k) + std::conj(cs[j]) * H(j + 1, k);
            H(j, k) = t;
        }
        // new rotation annihilating H(k+1,k):  [c s; -conj(s) conj(c)]
        const double denom = std::sqrt(std::norm(H(k, k)) + std::norm(H(k + 1, k)));
        if (denom == 0.0) {
            cs[k] = 1.0;
            sn[k] = 0.0;
        } else {
            cs[k] = std::conj(H(k, k)) / denom;
            sn[k] = std::conj(H(k + 1, k)) / denom;
        }
        const cd t = cs[k] * H(k, k) + sn[k] * H(k + 1, k);
        H(k, k) = t;
        H(k + 1, k) = 0.0;
        g(k + 1) = -std::conj(sn[k]) * g(k);
        g(k) = cs[k] * g(k);
        if (std::abs(g(k + 1)) / bnorm < tol) {
            ++k;
            break;
        }
    }
    // back substitution on the k x k triangular system
    VecC y = VecC::Zero(k);
    for (int i = k - 1; i >= 0; --i) {
        cd s = g(i);
        for (int j = i + 1; j < k; ++j) s -= H(i, j) * y(j);
        y(i) = s / H(i, i);
    }
    out.x = V.leftCols(k) * y;
    out.iterations = k;
    out.residual = (A * out.x - b).norm() / bnorm;
    out.converged = out.residual <= 10.0 * tol; // true residual, modest slack over the recurrence
    return out;
}

double condest_1norm(const MatC& A, const Eigen::PartialPivLU<MatC>& lu) {
    const Eigen::Index n = A.rows();
    const double a1 = A.cwiseAbs().colwise().sum().maxCoeff();
    // power-type estimator for ||A^-1||_1 (complex variant of the classic
    // 1-norm estimator: alternate solves with A and A^H)
    VecC x = VecC::Constant(n, cd(1.0 / static_cast<double>(n), 0.0));
    double est = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        const VecC y = lu.solve(x);
        const double g = y.cwiseAbs().sum();
        VecC xi(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double m = std::abs(y(i));
            xi(i) = (m > 0) ? y(i) / m : cd(1.0, 0.0);
        }
        const VecC z = lu.adjoint().solve(xi);
        Eigen::Index j = 0;
        z.cwiseAbs().maxCoeff(&j);
        if (g <= est + 1e-16 * est) break;
        est = g;
        const double zmax = std::abs(z(j));
        const double zx = std::abs(z.dot(x));
        if (zmax <= zx * (1.0 + 1e-12)) break;
        x.setZero();
        x(j) = 1.0;
    }
    // alternating safeguard vector (catches adversarial cancellation)
    VecC v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = (i % 2 == 0) ? 1.0 : -1.0;
        v(i) = cd(s * (1.0 + static_cast<double>(i) / std::max<double>(1.0, n - 1)), 0.0);
    }
    const double alt = lu.solve(v).cwiseAbs().sum() * 2.0 / (3.0 * static_cast<double>(n));
    return a1 * std::max(est, alt);
}

double exact_cond2(const MatC& A) {
    Eigen::BDCSVD<MatC> svd(A);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

double condition_estimate(const MatC& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("condition_estimate: square matrix required");
    if (A.rows() <= 2000) return exact_cond2(A);
    Eigen::PartialPivLU<MatC> lu(A);
    return condest_1norm(A, lu);
}

} // namespace ssie
