// Analytic sphere oracles: Mie transmission series (near and far fields),
// closed-form boundary-operator spectrum on the sphere, and interior Maxwell
// resonance finder.  Everything here is independent of the boundary-element
// machinery and is used to validate it.
#pragma once

#include <vector>

#include "ssie/formulations.hpp"
#include "ssie/kernels.hpp"
#include "ssie/types.hpp"

namespace ssie {

/// Riccati-Bessel functions psi_n(z) = z j_n(z), xi_n(z) = z h1_n(z) and
/// their derivatives for n = 0..nmax.  j_n by continued-fraction-seeded
/// downward recurrence, y_n by upward recurrence; accuracy ~1e-12 for
/// n <= 60, |z| <= 30.
struct RiccatiBessel {
    std::vector<cd> psi, psip, xi, xip;
};
RiccatiBessel riccati_bessel(int nmax, cd z);

/// Scattering/interior coefficients of the dielectric sphere, order n:
///   a[n]: TM scattered,  b[n]: TE scattered,
///   c[n]: TM interior,   d[n]: TE interior      (index 0 unused)
struct MieSolution {
    double radius = 1.0;
    MediumPair med;
    PlaneWave wave{Vec3(0, 0, 1), Vec3(1, 0, 0)};
    int N = 0;
    std::vector<cd> a, b, c, d;
    double tail_ratio = 0.0;  // |last coefficient| / max over orders
};

/// Solve the order-by-order transmission matching.  N = 0 picks the
/// truncation  ceil(x + 4 x^(1/3) + 20),  x = |kappa_e| * radius, then
/// certifies the tail (|last| < 1e-12 * max); explicit too-small N throws.
MieSolution mie_solve(double radius, const MediumPair& med, const PlaneWave& wave, int N = 0);

struct FarFieldPattern {
    std::vector<Vec3> directions;             // unit vectors
    std::vector<Eigen::Vector3cd> values;     // tangential to direction
};

FarFieldPattern mie_far_field(const MieSolution& sol, const std::vector<Vec3>& directions);

/// Near fields of the series (x strictly outside / inside the sphere).
Eigen::Vector3cd mie_scattered_field(const MieSolution& sol, const Vec3& x);
Eigen::Vector3cd mie_scattered_curl(const MieSolution& sol, const Vec3& x);
Eigen::Vector3cd mie_interior_field(const MieSolution& sol, const Vec3& x);
Eigen::Vector3cd mie_interior_curl(const MieSolution& sol, const Vec3& x);

/// Relative residuals of the two transmission conditions sampled on the
/// sphere surface: first  n x E  continuity, second  mu^-1 n x curl E.
std::pair<double, double> mie_transmission_residual(const MieSolution& sol, int n_samples = 64);

/// Scattering / extinction cross sections of the series.
double mie_scattering_cross_section(const MieSolution& sol);
double mie_extinction_cross_section(const MieSolution& sol);

/// Closed-form per-mode boundary-operator eigenvalues on the sphere of given
/// radius (z = kappa * radius):
///   electric family pair: -c1[n] and +c2[n] with
///     c1 = i psi' xi',  c2 = -i psi xi
///   magnetic family pair: +-m[n],  m = -(i/2)(psi xi' + psi' xi)
/// Per mode  c1 c2 + m^2 = 1/4  exactly (diagonalized Calderon identity).
struct SphereOperatorSpectrum {
    cd kappa;
    double radius = 1.0;
    std::vector<cd> c1, c2, m;  // index n (0 unused)
};
SphereOperatorSpectrum sphere_operator_spectrum(cd kappa, double radius, int n_max);

/// Interior Maxwell cavity resonances of the sphere in (lo, hi):
/// TE modes at zeros of j_n(kappa R), TM modes at zeros of psi_n'(kappa R);
/// bracketed bisection to 1e-10.
struct ResonanceMode {
    enum class Kind { TE, TM } kind;
    int n;
    double kappa;
};
std::vector<ResonanceMode> interior_resonance_modes(double radius, double lo, double hi);
std::vector<double> interior_resonances(double radius, double lo, double hi);

} // namespace ssie
