// Analytic sphere-oracle tests: Riccati-Bessel evaluation, transmission
// series coefficients, cross sections, far-field normalization, operator
// spectrum closed forms, and cavity-resonance finding.  Reference values in
// oracle_constants.hpp were computed with an independent high-precision
// implementation and frozen.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "oracle_constants.hpp"
#include "ssie/mie.hpp"
#include "ssie/quadrature.hpp"

using namespace ssie;

namespace {

double rel(cd got, cd want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

Vec3 dir_of(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

MieSolution canonical() {
    return mie_solve(1.0, MediumPair::from_wavenumbers(cd(1, 0), cd(2, 0)),
                     PlaneWave(Vec3(0, 0, 1), Vec3(1, 0, 0)));
}

} // namespace

TEST_CASE("Riccati-Bessel values match frozen references at z=1 and z=2") {
    const RiccatiBessel r1 = riccati_bessel(6, cd(1, 0));
    const RiccatiBessel r2 = riccati_bessel(6, cd(2, 0));
    const struct { cd got, want; } cases[] = {
        {r1.psi[1], oracle::psi_1_z1},   {r1.psip[1], oracle::dpsi_1_z1},
        {r1.xi[1], oracle::xi_1_z1},     {r1.xip[1], oracle::dxi_1_z1},
        {r1.psi[2], oracle::psi_2_z1},   {r1.psip[2], oracle::dpsi_2_z1},
        {r1.xi[2], oracle::xi_2_z1},     {r1.xip[2], oracle::dxi_2_z1},
        {r1.psi[3], oracle::psi_3_z1},   {r1.psip[3], oracle::dpsi_3_z1},
        {r1.xi[3], oracle::xi_3_z1},     {r1.xip[3], oracle::dxi_3_z1},
        {r1.psi[4], oracle::psi_4_z1},   {r1.psip[4], oracle::dpsi_4_z1},
        {r1.xi[4], oracle::xi_4_z1},     {r1.xip[4], oracle::dxi_4_z1},
        {r2.psi[1], oracle::psi_1_z2},   {r2.psip[1], oracle::dpsi_1_z2},
        {r2.xi[1], oracle::xi_1_z2},     {r2.xip[1], oracle::dxi_1_z2},
        {r2.psi[3], oracle::psi_3_z2},   {r2.psip[3], oracle::dpsi_3_z2},
        {r2.xi[3], oracle::xi_3_z2},     {r2.xip[3], oracle::dxi_3_z2},
        {r2.psi[4], oracle::psi_4_z2},   {r2.psip[4], oracle::dpsi_4_z2},
        {r2.xi[4], oracle::xi_4_z2},     {r2.xip[4], oracle::dxi_4_z2},
    };
    for (const auto& c : cases) CHECK(rel(c.got, c.want) < 1e-12);
}

TEST_CASE("Riccati-Bessel Wronskian psi xi' - psi' xi = i at all orders") {
    const cd args[] = {cd(0.5, 0), cd(1, 0), cd(2, 0), cd(7.7, 0), cd(10, 0),
                       cd(1, 0.5), cd(2, 1), cd(0.5, 2)};
    for (const cd z : args) {
        const int nmax = 40;
        const RiccatiBessel rb = riccati_bessel(nmax, z);
        for (int n = 0; n <= nmax; ++n) {
            const cd w = rb.psi[n] * rb.xip[n] - rb.psip[n] * rb.xi[n];
            CHECK(std::abs(w - cd(0, 1)) < 1e-12);
        }
    }
}

TEST_CASE("Riccati-Bessel rejects bad arguments") {
    CHECK_THROWS_AS(riccati_bessel(-1, cd(1, 0)), std::invalid_argument);
    CHECK_THROWS_AS(riccati_bessel(5, cd(0, 0)), std::invalid_argument);
}

TEST_CASE("sphere transmission coefficients match frozen references (eps ratio 4)") {
    const MieSolution sol = canonical();
    REQUIRE(sol.N >= 5);
    CHECK(sol.tail_ratio < 1e-12);
    const struct { cd got, want; } cases[] = {
        {sol.a[1], oracle::mie_a1}, {sol.b[1], oracle::mie_b1},
        {sol.c[1], oracle::mie_c1}, {sol.d[1], oracle::mie_d1},
        {sol.a[2], oracle::mie_a2}, {sol.b[2], oracle::mie_b2},
        {sol.c[2], oracle::mie_c2}, {sol.d[2], oracle::mie_d2},
        {sol.a[3], oracle::mie_a3}, {sol.b[3], oracle::mie_b3},
        {sol.c[3], oracle::mie_c3}, {sol.d[3], oracle::mie_d3},
        {sol.a[4], oracle::mie_a4}, {sol.b[4], oracle::mie_b4},
        {sol.c[4], oracle::mie_c4}, {sol.d[4], oracle::mie_d4},
        {sol.a[5], oracle::mie_a5}, {sol.b[5], oracle::mie_b5},
        {sol.c[5], oracle::mie_c5}, {sol.d[5], oracle::mie_d5},
    };
    for (const auto& c : cases) CHECK(rel(c.got, c.want) < 1e-10);
}

TEST_CASE("sphere transmission coefficients with permeability contrast") {
    const MieSolution sol = mie_solve(
        1.0, MediumPair::from_wavenumbers(cd(1, 0), cd(1.5, 0), cd(1, 0), cd(2, 0)),
        PlaneWave(Vec3(0, 0, 1), Vec3(1, 0, 0)));
    CHECK(rel(sol.a[1], oracle::mieMu_a1) < 1e-10);
    CHECK(rel(sol.b[1], oracle::mieMu_b1) < 1e-10);
    CHECK(rel(sol.c[1], oracle::mieMu_c1) < 1e-10);
    CHECK(rel(sol.d[1], oracle::mieMu_d1) < 1e-10);
    CHECK(rel(sol.a[2], oracle::mieMu_a2) < 1e-10);
    CHECK(rel(sol.b[2], oracle::mieMu_b2) < 1e-10);
    CHECK(rel(sol.c[2], oracle::mieMu_c2) < 1e-10);
    CHECK(rel(sol.d[2], oracle::mieMu_d2) < 1e-10);
}

TEST_CASE("cross sections match frozen references; optical theorem for lossless media") {
    const MieSolution sol = canonical();
    const double csca = mie_scattering_cross_section(sol);
    const double cext = mie_extinction_cross_section(sol);
    CHECK(std::abs(csca - oracle::mie_Csca) / oracle::mie_Csca < 1e-12);
    CHECK(std::abs(cext - oracle::mie_Cext) / oracle::mie_Cext < 1e-12);
    CHECK(std::abs(cext - csca) / csca < 1e-10);
}

TEST_CASE("no material contrast scatters nothing") {
    const MieSolution sol = mie_solve(1.0, MediumPair::from_wavenumbers(cd(1, 0), cd(1, 0)),
                                      PlaneWave(Vec3(0, 0, 1), Vec3(1, 0, 0)));
    double cmax = 0.0;
    for (int n = 1; n <= sol.N; ++n)
        cmax = std::max({cmax, std::abs(sol.a[n]), std::abs(sol.b[n])});
    CHECK(cmax < 1e-13);
    const FarFieldPattern ff = mie_far_field(sol, {dir_of(0.7, 0.3), dir_of(2.1, 4.0)});
    for (const auto& v : ff.values) CHECK(v.norm() < 1e-13);
    CHECK(mie_scattered_field(sol, Vec3(0, 0, 2)).norm() < 1e-13);
}

TEST_CASE("no contrast: interior series reproduces the incident plane wave") {
    const PlaneWave wave(Vec3(0, 0, 1), Vec3(1, 0, 0));
    const MieSolution sol =
        mie_solve(1.0, MediumPair::from_wavenumbers(cd(1, 0), cd(1, 0)), wave);
    for (int n = 1; n <= 5; ++n) {
        CHECK(rel(sol.c[n], cd(1, 0)) < 1e-12);
        CHECK(rel(sol.d[n], cd(1, 0)) < 1e-12);
    }
    const Vec3 pts[] = {{0.3, 0.1, -0.2}, {0.0, 0.0, 0.5}, {-0.4, 0.2, 0.3}};
    for (const Vec3& x : pts) {
        const Eigen::Vector3cd e = mie_interior_field(sol, x);
        const Eigen::Vector3cd c = mie_interior_curl(sol, x);
        CHECK((e - wave.field(cd(1, 0), x)).norm() < 1e-10);
        CHECK((c - wave.curl(cd(1, 0), x)).norm() < 1e-10);
    }
}

TEST_CASE("Rayleigh limit: cross section scales as kappa^4 with the polarizability factor") {
    auto csca_at = [](double x) {
        return mie_scattering_cross_section(mie_solve(
            1.0, MediumPair::from_wavenumbers(cd(x, 0), cd(2 * x, 0)),
            PlaneWave(Vec3(0, 0, 1), Vec3(1, 0, 0))));
    };
    const double c_lo = csca_at(0.01), c_hi = csca_at(0.1);
    const double slope = std::log(c_hi / c_lo) / std::log(10.0);
    CHECK(slope == doctest::Approx(4.0).epsilon(0.025));
    // prefactor: (8 pi / 3) x^4 |(eps-1)/(eps+2)|^2 with eps = 4
    const double want = (8.0 * pi / 3.0) * std::pow(0.01, 4) * std::pow(3.0 / 6.0, 2);
    CHECK(std::abs(c_lo - want) / want < 0.01);
}

TEST_CASE("far field is mirror symmetric across the incidence plane") {
    const MieSolution sol = canonical();
    std::vector<Vec3> dirs, mirr;
    for (double th : {0.4, 1.2, 2.5})
        for (double ph : {0.3, 1.1, 2.9, 4.4}) {
            dirs.push_back(dir_of(th, ph));
            mirr.push_back(dir_of(th, -ph));
        }
    const FarFieldPattern f = mie_far_field(sol, dirs);
    const FarFieldPattern g = mie_far_field(sol, mirr);
    for (size_t i = 0; i < dirs.size(); ++i) {
        // incident d = +z, p = +x: reflection y -> -y maps solution to itself
        const Eigen::Vector3cd want(f.values[i].x(), -f.values[i].y(), f.values[i].z());
        CHECK((g.values[i] - want).norm() < 1e-12 * (1.0 + f.values[i].norm()));
    }
}

TEST_CASE("far field is tangential to the observation direction") {
    const MieSolution sol = canonical();
    std::vector<Vec3> dirs;
    for (double th : {0.2, 0.9, 1.7, 2.8})
        for (double ph : {0.0, 1.3, 3.8}) dirs.push_back(dir_of(th, ph));
    const FarFieldPattern ff = mie_far_field(sol, dirs);
    for (size_t i = 0; i < dirs.size(); ++i)
        CHECK(std::abs(ff.values[i].dot(dirs[i].cast<cd>())) < 1e-12);
}

TEST_CASE("scattering amplitudes at 30/90/150 degrees match frozen references") {
    // In the scattering plane (phi = 0) the far field is S2 along theta-hat;
    // perpendicular to it (phi = 90 deg) it is -S1 along phi-hat; kappa_e = 1.
    const MieSolution sol = canonical();
    const double degs[] = {30.0, 90.0, 150.0};
    const cd wantS1[] = {oracle::mie_S1_30, oracle::mie_S1_90, oracle::mie_S1_150};
    const cd wantS2[] = {oracle::mie_S2_30, oracle::mie_S2_90, oracle::mie_S2_150};
    for (int k = 0; k < 3; ++k) {
        const double th = degs[k] * pi / 180.0;
        const FarFieldPattern ff = mie_far_field(sol, {dir_of(th, 0.0), dir_of(th, pi / 2)});
        const Vec3 that0(std::cos(th), 0.0, -std::sin(th));  // theta-hat at phi = 0
        const Vec3 phat90(-1.0, 0.0, 0.0);                   // phi-hat at phi = pi/2
        // E_inf = (i/kappa)(cos(phi) S2 theta-hat - sin(phi) S1 phi-hat), kappa = 1
        const cd S2 = cd(0, -1) * that0.cast<cd>().dot(ff.values[0]);
        const cd S1 = cd(0, 1) * phat90.cast<cd>().dot(ff.values[1]);
        CHECK(rel(S2, wantS2[k]) < 1e-12);
        CHECK(rel(S1, wantS1[k]) < 1e-12);
    }
}

TEST_CASE("total far-field power equals the series scattering cross section") {
    const MieSolution sol = canonical();
    const auto [xg, wg] = gauss01_rule(32);
    const int nphi = 64;
    std::vector<Vec3> dirs;
    std::vector<double> wts;
    for (size_t i = 0; i < xg.size(); ++i) {
        const double ct = 2.0 * xg[i] - 1.0, st = std::sqrt(1.0 - ct * ct);
        for (int j = 0; j < nphi; ++j) {
            const double ph = 2.0 * pi * (j + 0.5) / nphi;
            dirs.emplace_back(st * std::cos(ph), st * std::sin(ph), ct);
            wts.push_back(2.0 * wg[i] * (2.0 * pi / nphi));
        }
    }
    const FarFieldPattern ff = mie_far_field(sol, dirs);
    double power = 0.0;
    for (size_t i = 0; i < dirs.size(); ++i) power += wts[i] * ff.values[i].squaredNorm();
    CHECK(std::abs(power - oracle::mie_Csca) / oracle::mie_Csca < 1e-8);
}

TEST_CASE("series satisfies both transmission conditions on the surface") {
    const auto [t1, t2] = mie_transmission_residual(canonical());
    CHECK(t1 < 1e-10);
    CHECK(t2 < 1e-10);
    const MieSolution mu = mie_solve(
        1.0, MediumPair::from_wavenumbers(cd(1, 0), cd(1.5, 0), cd(1, 0), cd(2, 0)),
        PlaneWave(Vec3(0, 0, 1), Vec3(1, 0, 0)));
    const auto [m1, m2] = mie_transmission_residual(mu);
    CHECK(m1 < 1e-10);
    CHECK(m2 < 1e-10);
}

TEST_CASE("scattered near field approaches the far-field pattern") {
    const MieSolution sol = canonical();
    const Vec3 xhat = dir_of(1.1, 0.7);
    const double R = 2000.0;
    const Eigen::Vector3cd es = mie_scattered_field(sol, R * xhat);
    const FarFieldPattern ff = mie_far_field(sol, {xhat});
    const Eigen::Vector3cd lim = std::exp(cd(0, 1) * cd(R, 0)) / R * ff.values[0];
    CHECK((es - lim).norm() / lim.norm() < 2e-3);
}

TEST_CASE("mie_solve input validation and truncation certification") {
    const MediumPair med = MediumPair::from_wavenumbers(cd(10, 0), cd(20, 0));
    const PlaneWave wave(Vec3(0, 0, 1), Vec3(1, 0, 0));
    CHECK_THROWS_AS(mie_solve(-1.0, med, wave), std::invalid_argument);
    CHECK_THROWS_AS(mie_solve(1.0, med, wave, 3), std::runtime_error);  // N too small
    const MieSolution ok = mie_solve(1.0, med, wave);
    CHECK(ok.tail_ratio < 1e-12);
    CHECK(ok.N >= 10 + 4 * std::cbrt(10.0) + 20 - 1);
    CHECK_THROWS_AS(mie_interior_field(ok, Vec3(0, 0, 0)), std::invalid_argument);
}

TEST_CASE("sphere operator eigenvalues match frozen closed forms at kappa=1") {
    const SphereOperatorSpectrum sp = sphere_operator_spectrum(cd(1, 0), 1.0, 3);
    CHECK(rel(sp.c1[1], oracle::c1_n1) < 1e-12);
    CHECK(rel(sp.c2[1], oracle::c2_n1) < 1e-12);
    CHECK(rel(sp.m[1], oracle::m_n1) < 1e-12);
    CHECK(rel(sp.c1[2], oracle::c1_n2) < 1e-12);
    CHECK(rel(sp.c2[2], oracle::c2_n2) < 1e-12);
    CHECK(rel(sp.m[2], oracle::m_n2) < 1e-12);
    CHECK(rel(sp.c1[3], oracle::c1_n3) < 1e-12);
    CHECK(rel(sp.c2[3], oracle::c2_n3) < 1e-12);
    CHECK(rel(sp.m[3], oracle::m_n3) < 1e-12);
}

TEST_CASE("per-mode Calderon identity c1 c2 + m^2 = 1/4 to 1e-12") {
    for (const cd kappa : {cd(1, 0), cd(2.7, 0), cd(2, 0.5)}) {
        const SphereOperatorSpectrum sp = sphere_operator_spectrum(kappa, 1.0, 25);
        for (int n = 1; n <= 25; ++n)
            CHECK(std::abs(sp.c1[n] * sp.c2[n] + sp.m[n] * sp.m[n] - cd(0.25, 0)) < 1e-12);
    }
}

TEST_CASE("magnetic-operator eigenvalues decay with mode order (compactness)") {
    const SphereOperatorSpectrum sp = sphere_operator_spectrum(cd(1, 0), 1.0, 20);
    CHECK(std::abs(sp.m[10]) < std::abs(sp.m[5]));
    CHECK(std::abs(sp.m[20]) < std::abs(sp.m[10]));
    CHECK(std::abs(sp.m[20]) < 2e-2);
}

TEST_CASE("spectrum stays finite for absorbing exterior wavenumbers; kappa=0 rejected") {
    const SphereOperatorSpectrum sp = sphere_operator_spectrum(cd(0.5, 2.0), 1.0, 20);
    for (int n = 1; n <= 20; ++n) {
        CHECK(std::isfinite(std::abs(sp.c1[n])));
        CHECK(std::isfinite(std::abs(sp.c2[n])));
        CHECK(std::isfinite(std::abs(sp.m[n])));
    }
    CHECK_THROWS_AS(sphere_operator_spectrum(cd(0, 0), 1.0, 5), std::invalid_argument);
}

TEST_CASE("interior cavity resonances match the frozen table") {
    const auto modes = interior_resonance_modes(1.0, 2.0, 8.0);
    const size_t nref = std::size(oracle::resonance_table);
    REQUIRE(modes.size() == nref);
    for (size_t i = 0; i < nref; ++i) {
        const auto& want = oracle::resonance_table[i];
        const bool want_te = std::string(want.kind) == "TE";
        CHECK((modes[i].kind == ResonanceMode::Kind::TE) == want_te);
        CHECK(modes[i].n == want.n);
        CHECK(std::abs(modes[i].kappa - want.kappa) < 1e-10);
    }
    const auto ks = interior_resonances(1.0, 4.4, 4.6);
    REQUIRE(ks.size() == 1);
    CHECK(std::abs(ks[0] - oracle::j1_first_zero) < 1e-10);
    const auto tm = interior_resonances(1.0, 2.7, 2.8);
    REQUIRE(tm.size() == 1);
    CHECK(std::abs(tm[0] - oracle::tm1_first_zero) < 1e-10);
}

TEST_CASE("resonances scale inversely with sphere radius") {
    const auto unit = interior_resonances(1.0, 2.0, 8.0);
    const auto twice = interior_resonances(2.0, 1.0, 4.0);
    REQUIRE(unit.size() == twice.size());
    for (size_t i = 0; i < unit.size(); ++i)
        CHECK(std::abs(twice[i] - 0.5 * unit[i]) < 1e-10);
    CHECK_THROWS_AS(interior_resonances(1.0, 5.0, 2.0), std::invalid_argument);
}
