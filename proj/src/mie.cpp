#include "ssie/mie.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssie {

// ------------------------------------------------------------ Riccati-Bessel

RiccatiBessel riccati_bessel(int nmax, cd z) {
    if (nmax < 0) throw std::invalid_argument("riccati_bessel: nmax < 0");
    if (std::abs(z) < 1e-12) throw std::invalid_argument("riccati_bessel: |z| too small");
    const int N = nmax;
    std::vector<cd> j(N + 1), y(N + 1);

    if (N == 0) {
        j[0] = std::sin(z) / z;
    } else {
        // ratio j_N / j_{N-1} by modified Lentz on
        //   z / ((2N+1) - z^2/((2N+3) - z^2/(...)))
        const cd z2 = z * z;
        cd f(1e-30, 0.0), C = f, D(0.0, 0.0);
        // the fraction settles once the linear terms dominate, after ~|z| steps
        const int kmax = 300 + static_cast<int>(2.0 * std::abs(z));
        for (int k = 0; k < kmax; ++k) {
            const cd a = (k == 0) ? z : -z2;
            const cd b(2.0 * (N + k) + 1.0, 0.0);
            D = b + a * D;
            if (D == cd(0.0, 0.0)) D = cd(1e-30, 0.0);
            C = b + a / C;
            if (C == cd(0.0, 0.0)) C = cd(1e-30, 0.0);
            D = cd(1.0, 0.0) / D;
            const cd delta = C * D;
            f *= delta;
            if (std::abs(delta - cd(1.0, 0.0)) < 1e-16) break;
        }
        // downward recurrence from the seeded ratio, rescaling on overflow
        j[N] = f;
        j[N - 1] = cd(1.0, 0.0);
        for (int k = N - 1; k >= 1; --k) {
            j[k - 1] = (2.0 * k + 1.0) / z * j[k] - j[k + 1];
            if (std::abs(j[k - 1]) > 1e250) {
                for (int i = k - 1; i <= N; ++i) j[i] *= 1e-250;
            }
        }
        const cd scale = (std::sin(z) / z) / j[0];
        for (int k = 0; k <= N; ++k) j[k] *= scale;
    }

    y[0] = -std::cos(z) / z;
    if (N >= 1) {
        y[1] = -std::cos(z) / (z * z) - std::sin(z) / z;
        for (int k = 1; k < N; ++k) y[k + 1] = (2.0 * k + 1.0) / z * y[k] - y[k - 1];
    }

    RiccatiBessel rb;
    rb.psi.resize(N + 1);
    rb.psip.resize(N + 1);
    rb.xi.resize(N + 1);
    rb.xip.resize(N + 1);
    for (int k = 0; k <= N; ++k) {
        rb.psi[k] = z * j[k];
        rb.xi[k] = z * (j[k] + cd(0.0, 1.0) * y[k]);
    }
    rb.psip[0] = std::cos(z);
    rb.xip[0] = std::exp(cd(0.0, 1.0) * z);
    for (int k = 1; k <= N; ++k) {
        rb.psip[k] = rb.psi[k - 1] - static_cast<double>(k) * rb.psi[k] / z;
        rb.xip[k] = rb.xi[k - 1] - static_cast<double>(k) * rb.xi[k] / z;
    }
    return rb;
}

// ------------------------------------------------------------------ Mie solve

namespace {

MieSolution mie_solve_fixed(double radius, const MediumPair& med, const PlaneWave& wave, int N) {
    MieSolution sol;
    sol.radius = radius;
    sol.med = med;
    sol.wave = wave;
    sol.N = N;
    const cd ke = med.kappa_e(), ki = med.kappa_i();
    const cd m = ki / ke;
    const cd mur = med.mu_i / med.mu_e;
    const RiccatiBessel e = riccati_bessel(N, ke * radius);
    const RiccatiBessel i = riccati_bessel(N, ki * radius);
    sol.a.assign(N + 1, cd(0, 0));
    sol.b.assign(N + 1, cd(0, 0));
    sol.c.assign(N + 1, cd(0, 0));
    sol.d.assign(N + 1, cd(0, 0));
    for (int n = 1; n <= N; ++n) {
        const cd pe = e.psi[n], dpe = e.psip[n], xe = e.xi[n], dxe = e.xip[n];
        const cd pi_ = i.psi[n], dpi = i.psip[n];
        const cd denTE = mur * pi_ * dxe - m * xe * dpi;
        const cd denTM = m * pi_ * dxe - mur * xe * dpi;
        // interior numerators collapse by the Wronskian psi xi' - psi' xi = i
        sol.b[n] = (mur * pi_ * dpe - m * pe * dpi) / denTE;
        sol.d[n] = cd(0, 1) * m * mur / denTE;
        sol.a[n] = (m * pi_ * dpe - mur * pe * dpi) / denTM;
        sol.c[n] = cd(0, 1) * m * mur / denTM;
    }
    double maxc = 0.0;
    for (int n = 1; n <= N; ++n)
        maxc = std::max(maxc, std::max(std::abs(sol.a[n]), std::abs(sol.b[n])));
    const double last = std::max(std::abs(sol.a[N]), std::abs(sol.b[N]));
    sol.tail_ratio = (maxc > 0.0) ? last / maxc : 0.0;
    return sol;
}

} // namespace

MieSolution mie_solve(double radius, const MediumPair& med, const PlaneWave& wave, int N) {
    if (radius <= 0.0) throw std::invalid_argument("mie_solve: radius must be positive");
    const bool auto_n = (N <= 0);
    if (auto_n) {
        const double x = std::abs(med.kappa_e()) * radius;
        N = static_cast<int>(std::ceil(x + 4.0 * std::cbrt(x) + 20.0));
    }
    MieSolution sol = mie_solve_fixed(radius, med, wave, N);
    if (auto_n) {
        for (int tries = 0; tries < 3 && sol.tail_ratio >= 1e-12; ++tries)
            sol = mie_solve_fixed(radius, med, wave, sol.N + 15);
    }
    if (sol.tail_ratio >= 1e-12)
        throw std::runtime_error("mie_solve: series not converged (N too small)");
    return sol;
}

double mie_scattering_cross_section(const MieSolution& sol) {
    const double ke = std::abs(sol.med.kappa_e());
    double s = 0.0;
    for (int n = 1; n <= sol.N; ++n)
        s += (2.0 * n + 1.0) * (std::norm(sol.a[n]) + std::norm(sol.b[n]));
    return 2.0 * pi / (ke * ke) * s;
}

double mie_extinction_cross_section(const MieSolution& sol) {
    const double ke = std::abs(sol.med.kappa_e());
    double s = 0.0;
    for (int n = 1; n <= sol.N; ++n) s += (2.0 * n + 1.0) * (sol.a[n] + sol.b[n]).real();
    return 2.0 * pi / (ke * ke) * s;
}

// ------------------------------------------------------------------ far field

namespace {

struct WaveFrame {
    Vec3 u, v, w;    // u = unit polarization, w = direction, v = w x u
    double amp;      // |polarization|
};

WaveFrame wave_frame(const PlaneWave& wave) {
    WaveFrame f;
    f.w = wave.direction;
    f.amp = wave.polarization.norm();
    f.u = wave.polarization / f.amp;
    f.v = f.w.cross(f.u);
    return f;
}

} // namespace

FarFieldPattern mie_far_field(const MieSolution& sol, const std::vector<Vec3>& directions) {
    const WaveFrame fr = wave_frame(sol.wave);
    const cd ke = sol.med.kappa_e();
    FarFieldPattern out;
    out.directions = directions;
    out.values.resize(directions.size());
    for (size_t idx = 0; idx < directions.size(); ++idx) {
        const Vec3 xh = directions[idx].normalized();
        const double ct = std::clamp(xh.dot(fr.w), -1.0, 1.0);
        const double xu = xh.dot(fr.u), xv = xh.dot(fr.v);
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        const double phi = std::atan2(xv, xu);
        const double cp = std::cos(phi), sp = std::sin(phi);
        cd S1(0, 0), S2(0, 0);
        double pi_nm1 = 0.0, pi_n = 1.0;
        for (int n = 1; n <= sol.N; ++n) {
            const double tau_n = n * ct * pi_n - (n + 1.0) * pi_nm1;
            const double fn = (2.0 * n + 1.0) / (n * (n + 1.0));
            S1 += fn * (sol.a[n] * pi_n + sol.b[n] * tau_n);
            S2 += fn * (sol.a[n] * tau_n + sol.b[n] * pi_n);
            const double pi_np1 = ((2.0 * n + 1.0) * ct * pi_n - (n + 1.0) * pi_nm1) / n;
            pi_nm1 = pi_n;
            pi_n = pi_np1;
        }
        const Vec3 th = ct * cp * fr.u + ct * sp * fr.v - st * fr.w;
        const Vec3 ph = -sp * fr.u + cp * fr.v;
        out.values[idx] = fr.amp * (cd(0.0, 1.0) / ke) *
                          (cp * S2 * th.cast<cd>() - sp * S1 * ph.cast<cd>());
    }
    return out;
}

// ----------------------------------------------------------------- near field

namespace {

/// Sum of vector-spherical-harmonic series in the wave frame.  Radial kind:
/// true = outgoing (xi), false = regular (psi).  Coefficient vectors (index n,
/// 0 unused) multiply M_o1n, M_e1n, N_e1n, N_o1n; empty vectors are skipped.
Eigen::Vector3cd vsh_series(const MieSolution& sol, cd kappa, bool outgoing,
                            const std::vector<cd>& cMo, const std::vector<cd>& cMe,
                            const std::vector<cd>& cNe, const std::vector<cd>& cNo,
                            const Vec3& x) {
    const WaveFrame fr = wave_frame(sol.wave);
    const double r = x.norm();
    if (r < 1e-12) throw std::invalid_argument("mie field: point at origin");
    const cd rho = kappa * r;
    const double ct = std::clamp(x.dot(fr.w) / r, -1.0, 1.0);
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double phi = std::atan2(x.dot(fr.v), x.dot(fr.u));
    const double cp = std::cos(phi), sp = std::sin(phi);

    const RiccatiBessel rb = riccati_bessel(sol.N, rho);
    Eigen::Vector3cd F = Eigen::Vector3cd::Zero(); // (r, theta, phi) components
    double pi_nm1 = 0.0, pi_n = 1.0;
    for (int n = 1; n <= sol.N; ++n) {
        const double tau_n = n * ct * pi_n - (n + 1.0) * pi_nm1;
        const cd zn = (outgoing ? rb.xi[n] : rb.psi[n]) / rho;     // spherical fn
        const cd dz = (outgoing ? rb.xip[n] : rb.psip[n]) / rho;   // [rho z]'/rho
        if (!cMo.empty() && cMo[n] != cd(0, 0)) {
            F(1) += cMo[n] * (cp * pi_n * zn);
            F(2) += cMo[n] * (-sp * tau_n * zn);
        }
        if (!cMe.empty() && cMe[n] != cd(0, 0)) {
            F(1) += cMe[n] * (-sp * pi_n * zn);
            F(2) += cMe[n] * (-cp * tau_n * zn);
        }
        if (!cNe.empty() && cNe[n] != cd(0, 0)) {
            F(0) += cNe[n] * (cp * n * (n + 1.0) * st * pi_n * zn / rho);
            F(1) += cNe[n] * (cp * tau_n * dz);
            F(2) += cNe[n] * (-sp * pi_n * dz);
        }
        if (!cNo.empty() && cNo[n] != cd(0, 0)) {
            F(0) += cNo[n] * (sp * n * (n + 1.0) * st * pi_n * zn / rho);
            F(1) += cNo[n] * (sp * tau_n * dz);
            F(2) += cNo[n] * (cp * pi_n * dz);
        }
        const double pi_np1 = ((2.0 * n + 1.0) * ct * pi_n - (n + 1.0) * pi_nm1) / n;
        pi_nm1 = pi_n;
        pi_n = pi_np1;
    }
    const Vec3 rh = (st * cp) * fr.u + (st * sp) * fr.v + ct * fr.w;
    const Vec3 th = (ct * cp) * fr.u + (ct * sp) * fr.v - st * fr.w;
    const Vec3 ph = -sp * fr.u + cp * fr.v;
    return fr.amp * (F(0) * rh.cast<cd>() + F(1) * th.cast<cd>() + F(2) * ph.cast<cd>());
}

std::vector<cd> en_scaled(const MieSolution& sol, const std::vector<cd>& coef, cd factor) {
    std::vector<cd> c(sol.N + 1, cd(0, 0));
    cd in(0.0, 1.0); // i^n running power
    for (int n = 1; n <= sol.N; ++n) {
        const cd En = in * (2.0 * n + 1.0) / (n * (n + 1.0));
        c[n] = factor * En * coef[n];
        in *= cd(0.0, 1.0);
    }
    return c;
}

} // namespace

Eigen::Vector3cd mie_scattered_field(const MieSolution& sol, const Vec3& x) {
    const std::vector<cd> cNe = en_scaled(sol, sol.a, cd(0.0, 1.0));
    const std::vector<cd> cMo = en_scaled(sol, sol.b, cd(-1.0, 0.0));
    return vsh_series(sol, sol.med.kappa_e(), true, cMo, {}, cNe, {}, x);
}

Eigen::Vector3cd mie_scattered_curl(const MieSolution& sol, const Vec3& x) {
    const std::vector<cd> cMe = en_scaled(sol, sol.a, cd(0.0, 1.0));
    const std::vector<cd> cNo = en_scaled(sol, sol.b, cd(-1.0, 0.0));
    return sol.med.kappa_e() * vsh_series(sol, sol.med.kappa_e(), true, {}, cMe, {}, cNo, x);
}

Eigen::Vector3cd mie_interior_field(const MieSolution& sol, const Vec3& x) {
    const std::vector<cd> cMo = en_scaled(sol, sol.d, cd(1.0, 0.0));
    const std::vector<cd> cNe = en_scaled(sol, sol.c, cd(0.0, -1.0));
    return vsh_series(sol, sol.med.kappa_i(), false, cMo, {}, cNe, {}, x);
}

Eigen::Vector3cd mie_interior_curl(const MieSolution& sol, const Vec3& x) {
    const std::vector<cd> cNo = en_scaled(sol, sol.d, cd(1.0, 0.0));
    const std::vector<cd> cMe = en_scaled(sol, sol.c, cd(0.0, -1.0));
    return sol.med.kappa_i() * vsh_series(sol, sol.med.kappa_i(), false, {}, cMe, {}, cNo, x);
}

std::pair<double, double> mie_transmission_residual(const MieSolution& sol, int n_samples) {
    const cd ke = sol.med.kappa_e();
    double num1 = 0.0, den1 = 0.0, num2 = 0.0, den2 = 0.0;
    const double ga = pi * (3.0 - std::sqrt(5.0)); // Fibonacci sphere sampling
    for (int s = 0; s < n_samples; ++s) {
        const double zc = 1.0 - 2.0 * (s + 0.5) / n_samples;
        const double rr = std::sqrt(std::max(0.0, 1.0 - zc * zc));
        const double th = ga * s;
        const Vec3 nh(rr * std::cos(th), rr * std::sin(th), zc);
        const Vec3 x = sol.radius * nh;
        const Eigen::Vector3cd Eout =
            mie_scattered_field(sol, x) + sol.wave.field(ke, x);
        const Eigen::Vector3cd Cout =
            mie_scattered_curl(sol, x) + sol.wave.curl(ke, x);
        const Eigen::Vector3cd Ein = mie_interior_field(sol, x);
        const Eigen::Vector3cd Cin = mie_interior_curl(sol, x);
        const Eigen::Vector3cd dE = ccross(nh, Eout - Ein);
        const Eigen::Vector3cd dC = ccross(nh, Cout / sol.med.mu_e - Cin / sol.med.mu_i);
        const Eigen::Vector3cd rE = ccross(nh, sol.wave.field(ke, x));
        const Eigen::Vector3cd rC = ccross(nh, sol.wave.curl(ke, x) / sol.med.mu_e);
        num1 += dE.squaredNorm();
        den1 += rE.squaredNorm();
        num2 += dC.squaredNorm();
        den2 += rC.squaredNorm();
    }
    return {std::sqrt(num1 / den1), std::sqrt(num2 / den2)};
}

// ------------------------------------------------------------------ spectrum

SphereOperatorSpectrum sphere_operator_spectrum(cd kappa, double radius, int n_max) {
    if (kappa == cd(0.0, 0.0))
        throw std::invalid_argument("sphere_operator_spectrum: kappa must be nonzero");
    SphereOperatorSpectrum sp;
    sp.kappa = kappa;
    sp.radius = radius;
    const RiccatiBessel rb = riccati_bessel(n_max, kappa * radius);
    sp.c1.assign(n_max + 1, cd(0, 0));
    sp.c2.assign(n_max + 1, cd(0, 0));
    sp.m.assign(n_max + 1, cd(0, 0));
    const cd I(0.0, 1.0);
    for (int n = 1; n <= n_max; ++n) {
        sp.c1[n] = I * rb.psip[n] * rb.xip[n];
        sp.c2[n] = -I * rb.psi[n] * rb.xi[n];
        sp.m[n] = -I * 0.5 * (rb.psi[n] * rb.xip[n] + rb.psip[n] * rb.xi[n]);
    }
    return sp;
}

// ---------------------------------------------------------------- resonances

namespace {

double te_fn(int n, double z) { // spherical j_n(z), zeros = TE cavity modes
    const RiccatiBessel rb = riccati_bessel(n, cd(z, 0.0));
    return (rb.psi[n] / z).real();
}

double tm_fn(int n, double z) { // psi_n'(z), zeros = TM cavity modes
    const RiccatiBessel rb = riccati_bessel(n, cd(z, 0.0));
    return rb.psip[n].real();
}

} // namespace

std::vector<ResonanceMode> interior_resonance_modes(double radius, double lo, double hi) {
    if (!(radius > 0.0) || !(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("interior_resonance_modes: need 0 < lo < hi, radius > 0");
    std::vector<ResonanceMode> out;
    const int n_cap = static_cast<int>(std::ceil(hi * radius)) + 2;
    const double step = 0.02 / radius;
    for (int n = 1; n <= n_cap; ++n) {
        for (int kind = 0; kind < 2; ++kind) {
            auto f = [&](double kap) {
                return kind == 0 ? te_fn(n, kap * radius) : tm_fn(n, kap * radius);
            };
            double k0 = lo, f0 = f(k0);
            for (double k1 = lo + step; k0 < hi; k0 = k1, k1 += step) {
                k1 = std::min(k1, hi);
                const double f1 = f(k1);
                if (f0 == 0.0) { /* exact grid hit: handled by bisection below */
                }
                if (f0 * f1 < 0.0) {
                    double a = k0, b = k1;
                    for (int it = 0; it < 80 && (b - a) > 1e-10; ++it) {
                        const double mid = 0.5 * (a + b);
                        if (f(a) * f(mid) <= 0.0)
                            b = mid;
                        else
                            a = mid;
                    }
                    out.push_back({kind == 0 ? ResonanceMode::Kind::TE : ResonanceMode::Kind::TM,
                                   n, 0.5 * (a + b)});
                }
                f0 = f1;
                if (k1 >= hi) break;
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const ResonanceMode& a, const ResonanceMode& b) { return a.kappa < b.kappa; });
    return out;
}

std::vector<double> interior_resonances(double radius, double lo, double hi) {
    std::vector<double> ks;
    for (const auto& m : interior_resonance_modes(radius, lo, hi)) ks.push_back(m.kappa);
    return ks;
}

} // namespace ssie
