#include "ssie/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "ssie/operators.hpp"

namespace ssie {

cd green(cd kappa, double r) {
    return std::exp(cd(0.0, 1.0) * kappa * r) / (4.0 * pi * r);
}

Eigen::Vector3cd green_grad(cd kappa, const Vec3& x, const Vec3& y) {
    const Vec3 d = x - y;
    const double r = d.norm();
    const cd f = std::exp(cd(0.0, 1.0) * kappa * r) * (cd(0.0, 1.0) * kappa * r - 1.0) /
                 (4.0 * pi * r * r * r);
    return f * d.cast<cd>();
}

PlaneWave::PlaneWave(const Vec3& d, const Vec3& p) : direction(d), polarization(p) {
    const double dn = direction.norm();
    if (dn < 1e-300) throw std::invalid_argument("PlaneWave: zero direction");
    direction /= dn;
    if (std::abs(direction.dot(polarization)) > 1e-12 * polarization.norm())
        throw std::invalid_argument("PlaneWave: polarization must be orthogonal to direction");
}

Eigen::Vector3cd PlaneWave::field(cd kappa, const Vec3& x) const {
    return std::exp(cd(0.0, 1.0) * kappa * direction.dot(x)) * polarization.cast<cd>();
}

Eigen::Vector3cd PlaneWave::curl(cd kappa, const Vec3& x) const {
    const Vec3 dxp = direction.cross(polarization);
    return cd(0.0, 1.0) * kappa * std::exp(cd(0.0, 1.0) * kappa * direction.dot(x)) *
           dxp.cast<cd>();
}

std::pair<VecC, VecC> incident_traces(const PlaneWave& wave, cd kappa, const CurrentSpace& space) {
    // moments of the two driving surface fields (basis functions are
    // tangential, so testing against the full field realizes pi_tau)
    const VecC mD = moments(space, [&](const Vec3& x, const Vec3&) {
        return wave.field(kappa, x);
    });
    const Vec3 dxp = wave.direction.cross(wave.polarization);
    const VecC mN = moments(space, [&](const Vec3& x, const Vec3&) {
        return Eigen::Vector3cd(cd(0.0, 1.0) *
                                std::exp(cd(0.0, 1.0) * kappa * wave.direction.dot(x)) *
                                dxp.cast<cd>());
    });
    const MatX mass = assemble_mass(space);
    Eigen::LLT<MatX> llt(mass);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("incident_traces: mass matrix not SPD");
    VecC cD(space.n_dof), cN(space.n_dof);
    cD.real() = llt.solve(mD.real());
    cD.imag() = llt.solve(mD.imag());
    cN.real() = llt.solve(mN.real());
    cN.imag() = llt.solve(mN.imag());
    return {cD, cN};
}

} // namespace ssie
