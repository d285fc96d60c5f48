#include "ssie/formulations.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ssie {

// ------------------------------------------------------------------- media

namespace {

cd sqrt_upper(cd z) { // branch with nonnegative imaginary part
    cd s = std::sqrt(z);
    if (s.imag() < 0.0) s = -s;
    return s;
}

} // namespace

cd MediumPair::kappa_i() const { return omega * sqrt_upper(eps_i * mu_i); }
cd MediumPair::kappa_e() const { return omega * sqrt_upper(eps_e * mu_e); }
cd MediumPair::rho() const { return mu_e * kappa_i() / (mu_i * kappa_e()); }

MediumPair MediumPair::from_wavenumbers(cd kappa_e, cd kappa_i, cd mu_e, cd mu_i) {
    MediumPair m;
    m.omega = 1.0;
    m.mu_e = mu_e;
    m.mu_i = mu_i;
    m.eps_e = kappa_e * kappa_e / mu_e;
    m.eps_i = kappa_i * kappa_i / mu_i;
    return m;
}

std::string to_string(FormulationKind k) {
    switch (k) {
        case FormulationKind::S: return "S";
        case FormulationKind::T: return "T";
        case FormulationKind::Sprime: return "S'";
        case FormulationKind::Tprime: return "T'";
    }
    return "?";
}

// -------------------------------------------------------------- validation

namespace {

constexpr double rel_tol = 1e-12;

std::string fnum(double v) {
    char b[48];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

std::string fnum(cd z) {
    return "(" + fnum(z.real()) + (z.imag() < 0 ? "" : "+") + fnum(z.imag()) + "i)";
}

struct Checker {
    std::vector<std::string>* messages;
    bool ok = true;

    bool record(const std::string& text, bool pass) {
        messages->push_back(text + (pass ? ": pass" : ": FAIL"));
        ok = ok && pass;
        return pass;
    }
    // |z| != 0 at relative tolerance against the magnitude of its ingredients
    bool nonzero(const std::string& what, cd z, double scale) {
        const bool pass = std::abs(z) > rel_tol * std::max(scale, 1e-300);
        return record(what + " = " + fnum(z) + " != 0", pass);
    }
    bool sign_le(const std::string& what, double v, double scale) { // v <= 0
        const bool pass = v <= rel_tol * std::max(scale, 1e-300);
        return record(what + " = " + fnum(v) + " <= 0", pass);
    }
    bool sign_ge(const std::string& what, double v, double scale) { // v >= 0
        const bool pass = v >= -rel_tol * std::max(scale, 1e-300);
        return record(what + " = " + fnum(v) + " >= 0", pass);
    }
    bool strict_pos(const std::string& what, double v, double scale) { // v > 0
        const bool pass = v > rel_tol * std::max(scale, 1e-300);
        return record(what + " = " + fnum(v) + " > 0", pass);
    }
};

bool is_real(cd z) { return std::abs(z.imag()) <= rel_tol * std::abs(z); }
bool is_real_positive(cd z) { return is_real(z) && z.real() > 0.0; }

} // namespace

ValidationReport validate_params(const MediumPair& med, const CouplingParams& cp,
                                 bool lipschitz_mode) {
    ValidationReport rep;
    const cd ke = med.kappa_e(), ki = med.kappa_i();
    const cd a = cp.a, b = cp.b;
    const cd mu_ratio = med.mu_e / med.mu_i;

    // --- transmission uniqueness --------------------------------------
    {
        Checker c{&rep.messages};
        const bool adm = is_real_positive(ke) || ke.imag() > rel_tol * std::abs(ke);
        c.record("uniqueness: exterior wavenumber " + fnum(ke) +
                     " admissible (real positive, or positive imaginary part)",
                 adm);
        const cd t1 = std::conj(ke) * mu_ratio;
        c.sign_le("uniqueness: Im(conj(kappa_e) mu_e/mu_i)", t1.imag(), std::abs(t1));
        const cd t2 = std::conj(ke) * mu_ratio * ki * ki;
        c.sign_ge("uniqueness: Im(conj(kappa_e) (mu_e/mu_i) kappa_i^2)", t2.imag(), std::abs(t2));
        rep.uniqueness_ok = c.ok;
    }

    // --- interior-eigenvalue exclusion --------------------------------
    {
        Checker c{&rep.messages};
        const bool a_ok = c.nonzero("eigen-exclusion: a", a, std::abs(a));
        const bool b_ok = c.nonzero("eigen-exclusion: b", b, std::abs(b));
        if (a_ok && b_ok) {
            const cd r = a / b;
            if (is_real(ke)) {
                c.nonzero("eigen-exclusion (real kappa_e): Im(a/b)", cd(r.imag(), 0.0),
                          std::abs(r));
            } else {
                const double v = (ke * ke).imag() * (ke * r).imag();
                c.strict_pos("eigen-exclusion (complex kappa_e): Im(kappa_e^2) Im(kappa_e a/b)", v,
                             std::abs(ke * ke) * std::abs(ke * r));
            }
        }
        rep.interior_eigen_excluded = c.ok;
    }

    // --- Fredholm factors (both direct families) ----------------------
    {
        Checker c{&rep.messages};
        const double sab = std::abs(b) * std::abs(ke) + 2.0 * std::abs(a);
        const double sba = std::abs(b) + 2.0 * std::abs(a) * std::abs(ke);
        c.nonzero("fredholm (S family): b kappa_e + 2a", b * ke + 2.0 * a, sab);
        c.nonzero("fredholm (S family): b - 2 a kappa_e", b - 2.0 * a * ke, sba);
        c.nonzero("fredholm (T family): b kappa_e - 2a", b * ke - 2.0 * a, sab);
        c.nonzero("fredholm (T family): b + 2 a kappa_e", b + 2.0 * a * ke, sba);
        const cd f1 = 1.0 + mu_ratio;
        c.nonzero("fredholm: 1 + mu_e/mu_i", f1, 1.0 + std::abs(mu_ratio));
        const cd contrast = mu_ratio * ki * ki / (ke * ke);
        c.nonzero("fredholm: 1 + mu_e kappa_i^2 / (mu_i kappa_e^2)", 1.0 + contrast,
                  1.0 + std::abs(contrast));
        rep.fredholm_ok = c.ok;
    }

    // --- invertibility family / strict positivity form ----------------
    {
        Checker c{&rep.messages};
        const cd ke2 = ke * ke;
        if (lipschitz_mode) {
            c.record("positivity: eps_i real positive: " + fnum(med.eps_i),
                     is_real_positive(med.eps_i));
            c.record("positivity: eps_e real positive: " + fnum(med.eps_e),
                     is_real_positive(med.eps_e));
            c.record("positivity: mu_i real positive: " + fnum(med.mu_i),
                     is_real_positive(med.mu_i));
            c.record("positivity: mu_e real positive: " + fnum(med.mu_e),
                     is_real_positive(med.mu_e));
            c.record("positivity: a = 1: a = " + fnum(a), std::abs(a - 1.0) <= rel_tol);
            const cd eta = b / cd(0.0, -1.0); // b = -i eta
            c.record("positivity: b = -i eta, eta > 0: b = " + fnum(b),
                     is_real(eta) && eta.real() > 0.0);
        } else {
            const bool adm =
                is_real_positive(ke) ||
                (ke.imag() > rel_tol * std::abs(ke) && std::abs(ke2.real()) > rel_tol * std::abs(ke2));
            c.record("invertibility: kappa_e " + fnum(ke) +
                         " admissible (real positive, or Im > 0 with Re(kappa_e^2) != 0)",
                     adm);
            c.record("invertibility: a = 1: a = " + fnum(a), std::abs(a - 1.0) <= rel_tol);
            if (is_real(ke2)) {
                const cd eta = b / cd(0.0, 1.0); // b = i eta, eta real nonzero
                c.record("invertibility (kappa_e^2 real): b = i eta, eta real nonzero: b = " +
                             fnum(b),
                         is_real(eta) && std::abs(eta.real()) > rel_tol * std::abs(b) / 2.0);
            } else {
                const double s = ke2.imag() > 0.0 ? 1.0 : -1.0;
                const cd eta = b / (cd(0.0, -1.0) * ke * s); // b = -i eta kappa_e sign(Im ke^2)
                c.record(
                    "invertibility (kappa_e^2 complex): b = -i eta kappa_e sign(Im kappa_e^2), "
                    "eta > 0: b = " +
                        fnum(b),
                    is_real(eta) && eta.real() > 0.0);
            }
        }
        const cd f1 = 1.0 + med.mu_i / med.mu_e;
        c.nonzero("invertibility: 1 + mu_i/mu_e", f1, 1.0 + std::abs(med.mu_i / med.mu_e));
        const cd contrast = mu_ratio * ki * ki / ke2;
        c.nonzero("invertibility: 1 + mu_e kappa_i^2 / (mu_i kappa_e^2)", 1.0 + contrast,
                  1.0 + std::abs(contrast));
        rep.lipschitz_garding_ok = c.ok;
    }

    return rep;
}

// ------------------------------------------------------------ operator sets

namespace {

MatC leaf_matrix(const OperatorSet& o, const std::string& n) {
    if (n == "Se") return o.ext.S;
    if (n == "Si") return o.itr.S;
    if (n == "Ke") return o.ext.K;
    if (n == "Ki") return o.itr.K;
    if (n == "Sxe") return o.ext.Sx;
    if (n == "Sxi") return o.itr.Sx;
    if (n == "Kxe") return o.ext.Kx;
    if (n == "Kxi") return o.itr.Kx;
    if (n == "SxeT") return o.ext.Sx.transpose();
    if (n == "SxiT") return o.itr.Sx.transpose();
    if (n == "KxeT") return o.ext.Kx.transpose();
    if (n == "KxiT") return o.itr.Kx.transpose();
    if (n == "U0") return o.U0;
    if (n == "Ux0") return o.Ux0;
    if (n == "GB") return o.st.gram_b.cast<cd>();
    throw std::invalid_argument("OperatorSet::mono: unknown factor '" + n + "'");
}

} // namespace

const MatC& OperatorSet::mono(const std::string& key) const {
    auto it = monomial_cache.find(key);
    if (it != monomial_cache.end()) return it->second;
    MatC val;
    const size_t dot = key.rfind('.');
    if (dot == std::string::npos) {
        val = leaf_matrix(*this, key);
    } else {
        // left-to-right Gram-mediated product: prefix . D . rightmost factor
        const MatC& pre = mono(key.substr(0, dot));
        val = pre * spd_solve(mass_llt, leaf_matrix(*this, key.substr(dot + 1)));
    }
    return monomial_cache.emplace(key, std::move(val)).first->second;
}

OperatorSet assemble_operator_set(const CurrentSpace& space, const MediumPair& med,
                                  const AssemblyOptions& opt) {
    OperatorSet ops;
    ops.space = &space;
    ops.st = assemble_static_kernels(space, opt);
    ops.mass_llt.compute(ops.st.mass);
    if (ops.mass_llt.info() != Eigen::Success)
        throw std::runtime_error("assemble_operator_set: Gram factorization failed");
    ops.U0 = ops.st.Sv0 + ops.st.Sd0;
    ops.Ux0 = ops.st.SvR0 + ops.st.Ldk0;
    rebind_operator_set(ops, med, opt);
    return ops;
}

void rebind_operator_set(OperatorSet& ops, const MediumPair& med, const AssemblyOptions& opt) {
    if (!ops.space) throw std::invalid_argument("rebind_operator_set: unbound operator set");
    const cd ke = med.kappa_e(), ki = med.kappa_i();
    ops.med = med;
    if (ops.ext.kappa != ke)
        ops.ext = derive_blocks(assemble_kernels(*ops.space, ke, opt));
    if (ops.itr.kappa != ki)
        ops.itr = (ki == ke) ? ops.ext : derive_blocks(assemble_kernels(*ops.space, ki, opt));
    ops.monomial_cache.clear();
}

// ---------------------------------------------------------------- systems

namespace {

void check_bound(const MediumPair& med, const OperatorSet& ops, const char* who) {
    if (!ops.space) throw std::invalid_argument(std::string(who) + ": unbound operator set");
    if (ops.ext.kappa != med.kappa_e() || ops.itr.kappa != med.kappa_i())
        throw std::invalid_argument(std::string(who) +
                                    ": operator set assembled for different wavenumbers");
}

} // namespace

std::pair<MatC, MatC> build_Le_Ne(const MediumPair& med, const CouplingParams& cp,
                                  const OperatorSet& ops) {
    check_bound(med, ops, "build_Le_Ne");
    const cd a = cp.a, b = cp.b;
    const MatC GB = ops.st.gram_b.cast<cd>();
    MatC L = a * ops.ext.S - b * (0.5 * ops.U0 - ops.mono("Kxe.U0"));
    MatC N = -a * (0.5 * GB - ops.ext.K) + b * ops.mono("Sxe.U0");
    return {std::move(L), std::move(N)};
}

LinearSystem build_system(FormulationKind kind, const MediumPair& med, const CouplingParams& cp,
                          const OperatorSet& ops, const PlaneWave& wave) {
    check_bound(med, ops, "build_system");
    const cd a = cp.a, b = cp.b;
    const cd rho = med.rho();
    const cd ke = med.kappa_e();
    const auto& O = ops;

    LinearSystem sys;
    sys.kind = kind;

    switch (kind) {
        case FormulationKind::S:
            sys.A = rho * (-(a / 2.0) * O.ext.S + (b / 4.0) * O.U0 - (b / 2.0) * O.mono("Kxe.U0") +
                           a * O.mono("Kxi.Se") - (b / 2.0) * O.mono("Kxi.U0") +
                           b * O.mono("Kxi.Kxe.U0")) -
                    (a / 2.0) * O.itr.S + a * O.mono("Sxi.Ke") + b * O.mono("Sxi.Sxe.U0");
            break;
        case FormulationKind::T:
            sys.A = (a / 4.0) * O.st.gram_b.cast<cd>() +
                    rho * (a * O.mono("Sxi.Se") - (b / 2.0) * O.mono("Sxi.U0") +
                           b * O.mono("Sxi.Kxe.U0")) -
                    (a / 2.0) * O.ext.K - (b / 2.0) * O.mono("Sxe.U0") - (a / 2.0) * O.itr.K +
                    a * O.mono("Kxi.Ke") + b * O.mono("Kxi.Sxe.U0");
            break;
        case FormulationKind::Sprime:
            sys.A = rho * ((a / 2.0) * O.ext.S - a * O.mono("Se.KxiT") - (b / 4.0) * O.U0 +
                           (b / 2.0) * O.mono("U0.KxiT") + (b / 2.0) * O.mono("U0.KxeT") -
                           b * O.mono("U0.KxeT.KxiT")) +
                    (a / 2.0) * O.itr.S - a * O.mono("Ke.SxiT") - b * O.mono("U0.SxeT.SxiT");
            break;
        case FormulationKind::Tprime:
            sys.A = (a / 4.0) * O.st.gram_b.cast<cd>() +
                    rho * (-a * O.mono("Se.SxiT") + (b / 2.0) * O.mono("U0.SxiT") -
                           b * O.mono("U0.KxeT.SxiT")) +
                    (a / 2.0) * O.ext.K + (a / 2.0) * O.itr.K - a * O.mono("Ke.KxiT") +
                    (b / 2.0) * O.mono("U0.SxeT") - b * O.mono("U0.SxeT.KxiT");
            break;
    }

    // incident-trace moments (Dirichlet and stripped Neumann)
    const Vec3 dxp = wave.direction.cross(wave.polarization);
    const VecC momD =
        moments(*ops.space, [&](const Vec3& x, const Vec3&) { return wave.field(ke, x); });
    const VecC momN = moments(*ops.space, [&](const Vec3& x, const Vec3&) {
        return Eigen::Vector3cd(cd(0.0, 1.0) * std::exp(cd(0.0, 1.0) * ke * wave.direction.dot(x)) *
                                dxp.cast<cd>());
    });
    const VecC cD = spd_solve(ops.mass_llt, momD);
    const VecC cN = spd_solve(ops.mass_llt, momN);

    switch (kind) {
        case FormulationKind::S:
            sys.rhs = (rho / 2.0) * momD - rho * (O.itr.Kx * cD) - O.itr.Sx * cN;
            break;
        case FormulationKind::T:
            sys.rhs = -rho * (O.itr.Sx * cD) + 0.5 * momN - O.itr.Kx * cN;
            break;
        case FormulationKind::Sprime:
        case FormulationKind::Tprime:
            sys.rhs = a * momD - b * (O.Ux0 * cN);
            break;
    }
    return sys;
}

// ------------------------------------------------------------------ solve

SolveResult solve(const MatC& A, const VecC& rhs, const SolveMethod& method) {
    if (A.rows() != A.cols() || A.rows() != rhs.size())
        throw std::invalid_argument("solve: dimension mismatch");
    SolveResult r;
    const double bnorm = rhs.norm();
    if (bnorm == 0.0) {
        r.coefficients = VecC::Zero(A.cols());
        return r;
    }
    if (method.type == SolveMethod::Type::lu) {
        Eigen::PartialPivLU<MatC> lu(A);
        r.coefficients = lu.solve(rhs);
        r.residual = (A * r.coefficients - rhs).norm() / bnorm;
        if (!(r.residual <= 1e-10)) {
            std::ostringstream msg;
            msg << "solve: direct solve failed to verify (relative residual " << r.residual
                << ", condition estimate " << condition_estimate(A) << ")";
            throw std::runtime_error(msg.str());
        }
    } else {
        const GmresResult g = gmres(A, rhs, method.tol, method.maxit);
        r.coefficients = g.x;
        r.residual = g.residual;
        r.iterations = g.iterations;
        if (!g.converged) {
            std::ostringstream msg;
            msg << "solve: gmres stalled at relative residual " << g.residual << " after "
                << g.iterations << " iterations (condition estimate " << condition_estimate(A)
                << ")";
            throw std::runtime_error(msg.str());
        }
    }
    return r;
}

SolveResult solve(const LinearSystem& system, const SolveMethod& method) {
    return solve(system.A, system.rhs, method);
}

} // namespace ssie
