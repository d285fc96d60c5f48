#include "ssie/operators.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "detail.hpp"
#include "ssie/kernels.hpp"

namespace ssie {

KernelSet assemble_kernels(const CurrentSpace& space, cd kappa, const AssemblyOptions& opt) {
    KernelSet k;
    detail::assemble_kernels_into(space, kappa, opt, /*want_cross=*/true, /*want_ldk=*/true, k);
    const detail::LineTables lt = detail::build_line_tables(space);
    k.Ldk = detail::assemble_ldk(space, kappa, lt);
    return k;
}

StaticKernels assemble_static_kernels(const CurrentSpace& space, const AssemblyOptions& opt) {
    StaticKernels st;
    KernelSet k0;
    detail::assemble_kernels_into(space, cd(0.0, 0.0), opt, /*want_cross=*/false,
                                  /*want_ldk=*/false, k0);
    st.Sv0 = std::move(k0.Sv);
    st.Sd0 = std::move(k0.Sd);
    st.SvR0 = std::move(k0.SvR);
    const detail::LineTables lt = detail::build_line_tables(space);
    st.Ldk0 = detail::assemble_ldk(space, cd(0.0, 0.0), lt);
    st.mass = assemble_mass(space);
    st.gram_b = assemble_pairing(space);
    return st;
}

OperatorBlocks derive_blocks(const KernelSet& k, bool flip_m_sign) {
    if (k.kappa == cd(0.0, 0.0))
        throw std::invalid_argument("derive_blocks: wavenumber must be nonzero");
    OperatorBlocks b;
    b.kappa = k.kappa;
    b.S = -(k.kappa * k.Sv - k.Sd / k.kappa);
    b.Sx = -(k.kappa * k.SvR - k.Ldk / k.kappa);
    const double s = flip_m_sign ? -1.0 : 1.0;
    b.K = -s * k.Cross;
    b.Kx = -s * k.CrossR;
    return b;
}

// --------------------------------------------------------- named wrappers

namespace {

KernelSet kernels_no_ldk(const CurrentSpace& space, cd kappa, const AssemblyOptions& opt,
                         bool want_cross) {
    KernelSet k;
    detail::assemble_kernels_into(space, kappa, opt, want_cross, false, k);
    return k;
}

} // namespace

BoundaryOperatorMatrix assemble_V(cd kappa, const CurrentSpace& space,
                                  const AssemblyOptions& opt) {
    KernelSet k = kernels_no_ldk(space, kappa, opt, false);
    return {OperatorKind::V_scalar, kappa, std::move(k.Sv)};
}

BoundaryOperatorMatrix assemble_C(cd kappa, const CurrentSpace& space,
                                  const AssemblyOptions& opt) {
    if (kappa == cd(0.0, 0.0))
        throw std::invalid_argument("assemble_C: wavenumber must be nonzero");
    KernelSet k = kernels_no_ldk(space, kappa, opt, false);
    return {OperatorKind::C, kappa, -(kappa * k.Sv - k.Sd / kappa)};
}

BoundaryOperatorMatrix assemble_M(cd kappa, const CurrentSpace& space,
                                  const AssemblyOptions& opt) {
    KernelSet k = kernels_no_ldk(space, kappa, opt, true);
    return {OperatorKind::M, kappa, -k.Cross}; // opt.flip_m_sign already applied by the core
}

BoundaryOperatorMatrix assemble_C0_static(cd kappa, const CurrentSpace& space,
                                          const AssemblyOptions& opt) {
    if (kappa == cd(0.0, 0.0))
        throw std::invalid_argument("assemble_C0_static: wavenumber must be nonzero");
    KernelSet k = kernels_no_ldk(space, cd(0.0, 0.0), opt, false);
    return {OperatorKind::C0_static, kappa, -kappa * k.Sv + k.Sd / kappa};
}

BoundaryOperatorMatrix assemble_C0_star(const CurrentSpace& space, const AssemblyOptions& opt) {
    KernelSet k = kernels_no_ldk(space, cd(0.0, 0.0), opt, false);
    return {OperatorKind::C0_star, std::nullopt, k.Sv + k.Sd};
}

// --------------------------------------------- weak operator-identity checks

namespace {

/// Fixed battery of smooth tangential trace densities: mass-projected
/// coefficients of pi_tau(p e^{i kappa d.x}) and pi_tau(i (d x p) e^{i kappa d.x})
/// for four direction/polarization pairs.
MatC trace_battery(cd kappa, const CurrentSpace& space, const Eigen::LLT<MatX>& mass_llt) {
    const std::array<std::pair<Vec3, Vec3>, 4> dp = {{{Vec3(0, 0, 1), Vec3(1, 0, 0)},
                                                      {Vec3(1, 0, 0), Vec3(0, 1, 0)},
                                                      {Vec3(0, 1, 0), Vec3(0, 0, 1)},
                                                      {Vec3(0, 0, 1), Vec3(0, 1, 0)}}};
    MatC V(space.n_dof, 8);
    int col = 0;
    for (const auto& [d, p] : dp) {
        const Vec3 dxp = d.cross(p);
        const VecC mD = moments(space, [&](const Vec3& x, const Vec3&) {
            return Eigen::Vector3cd(std::exp(cd(0.0, 1.0) * kappa * d.dot(x)) * p.cast<cd>());
        });
        const VecC mN = moments(space, [&](const Vec3& x, const Vec3&) {
            return Eigen::Vector3cd(cd(0.0, 1.0) * std::exp(cd(0.0, 1.0) * kappa * d.dot(x)) *
                                    dxp.cast<cd>());
        });
        for (const VecC* m : {&mD, &mN}) {
            VecC c(space.n_dof);
            c.real() = mass_llt.solve(m->real());
            c.imag() = mass_llt.solve(m->imag());
            V.col(col++) = c;
        }
    }
    return V;
}

MatC mass_solve(const Eigen::LLT<MatX>& llt, const MatC& B) {
    MatC X(B.rows(), B.cols());
    X.real() = llt.solve(MatX(B.real()));
    X.imag() = llt.solve(MatX(B.imag()));
    return X;
}

struct WeakParts {
    MatC VH_SxDSV, VH_KxDKV, VH_QV; // Q = gram_b / 4
    MatC VH_SxDKV, VH_KxDSV;
};

WeakParts weak_parts(cd kappa, const CurrentSpace& space, const AssemblyOptions& opt,
                     const OperatorBlocks* blocks, const StaticKernels* st) {
    OperatorBlocks local;
    if (!blocks) {
        local = derive_blocks(assemble_kernels(space, kappa, opt));
        blocks = &local;
    }
    MatX mass = st ? st->mass : assemble_mass(space);
    MatX gb = st ? st->gram_b : assemble_pairing(space);
    Eigen::LLT<MatX> llt(mass);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("weak identity check: mass matrix not SPD");
    const MatC V = trace_battery(kappa, space, llt);
    const MatC SV = blocks->S * V, KV = blocks->K * V;
    const MatC DSV = mass_solve(llt, SV), DKV = mass_solve(llt, KV);
    WeakParts w;
    const MatC VH = V.adjoint();
    w.VH_SxDSV = VH * (blocks->Sx * DSV);
    w.VH_KxDKV = VH * (blocks->Kx * DKV);
    w.VH_QV = VH * (0.25 * gb * V);
    w.VH_SxDKV = VH * (blocks->Sx * DKV);
    w.VH_KxDSV = VH * (blocks->Kx * DSV);
    return w;
}

} // namespace

double calderon_residual(cd kappa, const CurrentSpace& space, const AssemblyOptions& opt,
                         const OperatorBlocks* blocks, const StaticKernels* st) {
    const WeakParts w = weak_parts(kappa, space, opt, blocks, st);
    return (w.VH_SxDSV + w.VH_KxDKV - w.VH_QV).norm() / w.VH_QV.norm();
}

double anticommutator_residual(cd kappa, const CurrentSpace& space, const AssemblyOptions& opt,
                               const OperatorBlocks* blocks, const StaticKernels* st) {
    const WeakParts w = weak_parts(kappa, space, opt, blocks, st);
    return (w.VH_SxDKV + w.VH_KxDSV).norm() / w.VH_SxDKV.norm();
}

// ----------------------------------------------------------- binary dump

void dump_matrix(const std::string& path, const MatC& m) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("dump_matrix: cannot open " + path);
    const std::int64_t dims[2] = {static_cast<std::int64_t>(m.rows()),
                                  static_cast<std::int64_t>(m.cols())};
    f.write(reinterpret_cast<const char*>(dims), 16);
    std::vector<cd> row(m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = m(i, j);
        f.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(cd)));
    }
    if (!f) throw std::runtime_error("dump_matrix: write failed: " + path);
}

MatC read_matrix_dump(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_matrix_dump: cannot open " + path);
    std::int64_t dims[2];
    f.read(reinterpret_cast<char*>(dims), 16);
    if (!f || dims[0] < 0 || dims[1] < 0)
        throw std::runtime_error("read_matrix_dump: bad header: " + path);
    MatC m(dims[0], dims[1]);
    std::vector<cd> row(m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        f.read(reinterpret_cast<char*>(row.data()),
               static_cast<std::streamsize>(row.size() * sizeof(cd)));
        if (!f) throw std::runtime_error("read_matrix_dump: truncated: " + path);
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = row[j];
    }
    return m;
}

} // namespace ssie
