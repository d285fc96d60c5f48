// Galerkin assembly of the boundary integral operators.
//
// Testing convention (fixed once, used everywhere): matrices are tested with
// the rotated basis n x f_l, which realizes the duality pairing
// B(j,m) = int_G j.(m x n) ds exactly on the discrete space.  Equivalently,
// after stripping the leading rotation from each operator, all matrices below
// are plain L2 Galerkin matrices of the stripped operators, and the pairing
// Gram of the identity is the skew matrix `gram_b`.
//
// Raw kernel matrices (f = basis, g = Green kernel, d = x - y):
//   Sv    [l,k] = int int g  f_l . f_k                      (vector single layer)
//   Sd    [l,k] = int int g  div f_l div f_k                (div-div single layer)
//   Cross [l,k] = int int    f_l . (grad_x g x f_k)         (magnetic kernel)
//   SvR   [l,k] = int int g  f_l . (n_y x f_k)              (rotated-density variant)
//   CrossR[l,k] = int int    f_l . (grad_x g x (n_y x f_k))
//   Ldk   [l,k] = int div f_l(x) . psi_kappa[line charges of n x f_k](x)
// (Ldk carries the boundary line charges created by rotating a div-conforming
// function: div_G(n x f) = -curl_G f concentrates on panel boundaries.)
//
// Derived operator blocks in the stripped convention:
//   electric   S(kappa)  = -(kappa Sv - Sd / kappa)
//   magnetic   K(kappa)  = -Cross
//   rotated-density variants (used to realize operator products):
//   Sx(kappa) = -(kappa SvR - Ldk / kappa),   Kx(kappa) = -CrossR
//   static combined blocks U0 = Sv0 + Sd0,  Ux0 = SvR0 + Ldk0.
// The overall signs are calibrated once by requiring the discrete
// Stratton-Chu identity to reproduce an analytic interior field, and frozen
// by regression tests.
//
// Operator products X1 X2 are realized as  X1x * Minv * X2  with the SPD L2
// mass Gram M (the skew pairing Gram is exactly singular on these spaces and
// must never be inverted).
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ssie/kernels.hpp"
#include "ssie/mesh.hpp"
#include "ssie/quadrature.hpp"
#include "ssie/types.hpp"

namespace ssie {

struct AssemblyOptions {
    PairScheme scheme;          // quadrature orders (see quadrature.hpp)
    int threads = 0;            // 0 = use configured global default
    bool flip_m_sign = false;   // fault-injection hook: negates the magnetic kernel
};

/// Raw fused kernel matrices at one wavenumber.
struct KernelSet {
    cd kappa = 0.0;
    MatC Sv, Sd, Cross, SvR, CrossR, Ldk;
};

/// Static (kappa = 0) kernels plus the two Grams; assembled once per space
/// and reused across a wavenumber sweep.
struct StaticKernels {
    MatC Sv0, Sd0, SvR0, Ldk0;
    MatX mass;      // SPD L2 Gram <f_l, f_k>
    MatX gram_b;    // skew pairing Gram  int f_l . (f_k x n)
};

/// Derived per-kappa operator blocks (see header comment).
struct OperatorBlocks {
    cd kappa = 0.0;
    MatC S, K, Sx, Kx;
};

KernelSet assemble_kernels(const CurrentSpace& space, cd kappa, const AssemblyOptions& opt = {});
StaticKernels assemble_static_kernels(const CurrentSpace& space, const AssemblyOptions& opt = {});
OperatorBlocks derive_blocks(const KernelSet& k, bool flip_m_sign = false);

MatX assemble_mass(const CurrentSpace& space);
MatX assemble_pairing(const CurrentSpace& space);

/// L2 moment vector  mom_l = <f_l, u>  of a (surface-sampled) field.
VecC moments(const CurrentSpace& space,
             const std::function<Eigen::Vector3cd(const Vec3& x, const Vec3& n)>& field);

// ---------------------------------------------------------------------------
// named operator matrices (contract-shaped wrappers over the fused assembly)
// ---------------------------------------------------------------------------

enum class OperatorKind { C, M, C0_static, C0_star, V_scalar, Gram_B };

struct BoundaryOperatorMatrix {
    OperatorKind kind;
    std::optional<cd> kappa;
    MatC mat;
};

BoundaryOperatorMatrix assemble_V(cd kappa, const CurrentSpace& space, const AssemblyOptions& opt = {});
BoundaryOperatorMatrix assemble_C(cd kappa, const CurrentSpace& space, const AssemblyOptions& opt = {});
BoundaryOperatorMatrix assemble_M(cd kappa, const CurrentSpace& space, const AssemblyOptions& opt = {});
BoundaryOperatorMatrix assemble_C0_static(cd kappa, const CurrentSpace& space, const AssemblyOptions& opt = {});
BoundaryOperatorMatrix assemble_C0_star(const CurrentSpace& space, const AssemblyOptions& opt = {});

/// Scalar static single layer on piecewise-constant panel functions
/// (n_tris x n_tris); used by the constant-density sphere check.
MatX scalar_V0_piecewise_constant(const SurfaceMesh& mesh, const AssemblyOptions& opt = {});

// ---------------------------------------------------------------------------
// operator-identity diagnostics
// ---------------------------------------------------------------------------

/// Residual of the discrete Calderon identity  Sx D S + Kx D K = 1/4 B
/// measured weakly against a fixed battery of plane-wave trace densities
/// (smooth, level-independent targets); decreases under refinement.
/// Optionally reuses preassembled blocks/statics to avoid re-assembly.
double calderon_residual(cd kappa, const CurrentSpace& space, const AssemblyOptions& opt = {},
                         const OperatorBlocks* blocks = nullptr, const StaticKernels* st = nullptr);

/// Same harness for the anticommutator  Sx D K + Kx D S  (relative to the
/// size of Sx D K on the battery).
double anticommutator_residual(cd kappa, const CurrentSpace& space, const AssemblyOptions& opt = {},
                               const OperatorBlocks* blocks = nullptr, const StaticKernels* st = nullptr);

// ---------------------------------------------------------------------------
// binary matrix dump (row-major complex128, little-endian, 16-byte header)
// ---------------------------------------------------------------------------

void dump_matrix(const std::string& path, const MatC& m);
MatC read_matrix_dump(const std::string& path);

} // namespace ssie
