// Common scalar/linear-algebra aliases used across the library.
#pragma once

#include <complex>
#include <Eigen/Dense>

namespace ssie {

using cd   = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;
using MatX = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;

/// Component-wise cross product of complex 3-vectors.  Eigen's cross()
/// conjugates its result for complex scalars; this one does not.
inline Eigen::Vector3cd ccross(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
    return {a.y() * b.z() - a.z() * b.y(),
            a.z() * b.x() - a.x() * b.z(),
            a.x() * b.y() - a.y() * b.x()};
}

inline Eigen::Vector3cd ccross(const Vec3& a, const Eigen::Vector3cd& b) {
    return ccross(Eigen::Vector3cd(a.cast<cd>()), b);
}

} // namespace ssie
