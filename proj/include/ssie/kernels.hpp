// Helmholtz kernel, incident plane waves, and their discrete traces.
//
// Trace conventions used throughout: for a field u and outward normal n,
// the tangential-components trace is pi_tau u = u - (u.n)n and the rotated
// (Dirichlet) trace is n x u.  Every assembled operator follows the "stripped"
// convention: the leading rotation n x . is factored out of the operator and
// absorbed into the rotated test functions, so discrete densities live in the
// plain tangential-components convention.
#pragma once

#include <utility>

#include "ssie/mesh.hpp"
#include "ssie/types.hpp"

namespace ssie {

/// Outgoing Helmholtz kernel  e^{i kappa r} / (4 pi r).
cd green(cd kappa, double r);

/// grad_x of the kernel at x-y:  e^{i kappa r}(i kappa r - 1)(x-y)/(4 pi r^3).
Eigen::Vector3cd green_grad(cd kappa, const Vec3& x, const Vec3& y);

/// Incident plane wave  E(x) = p exp(i kappa d.x)  with unit direction d and
/// orthogonal polarization p.
struct PlaneWave {
    Vec3 direction;
    Vec3 polarization;

    PlaneWave(const Vec3& d, const Vec3& p);

    Eigen::Vector3cd field(cd kappa, const Vec3& x) const;
    Eigen::Vector3cd curl(cd kappa, const Vec3& x) const;   // = i kappa d x p e^{i kappa d.x}
};

/// Coefficients (in the edge basis, via mass-Gram projection) of the two
/// incident traces that drive every formulation:
///   first:  pi_tau E^inc
///   second: pi_tau of kappa^{-1} curl E^inc rotated back by the stripped
///           convention, i.e. i (d x p) e^{i kappa d.x} projected tangentially
///           (kappa-independent prefactor by design).
std::pair<VecC, VecC> incident_traces(const PlaneWave& wave, cd kappa, const CurrentSpace& space);

} // namespace ssie
