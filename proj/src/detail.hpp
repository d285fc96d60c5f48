// Internal assembly interfaces shared between translation units.
#pragma once

#include <array>
#include <map>
#include <vector>

#include "ssie/operators.hpp"

namespace ssie::detail {

void assemble_kernels_into(const CurrentSpace& space, cd kappa, const AssemblyOptions& opt,
                           bool want_cross, bool want_ldk, KernelSet& out);

/// Analytic integral  int_T 1/|x-y| dA(x)  over the triangle with vertices V
/// (counter-clockwise with respect to nh), evaluated at y.
double tri_pot_static(const std::array<Vec3, 3>& V, const Vec3& nh, const Vec3& y);

/// Line-charge tables for the divergence of rotated basis fields:
/// div (n x f_k) restricted to a panel is a line density on the panel
/// boundary; lam collects, per geometric edge, the coefficient of every
/// basis function k whose rotated field carries charge there.
struct LineTables {
    static constexpr int q1d = 8;
    std::array<double, q1d> xg{}, wg{};  // Gauss points/weights on [0,1]
    std::vector<Vec3> ypts;              // [e * q1d + g], canonical A->B parameterization
    struct Entry {
        int k;
        std::array<double, q1d> lam;
    };
    std::vector<std::vector<Entry>> lam; // per edge, ascending k
};

LineTables build_line_tables(const CurrentSpace& space);

/// Ldk_{lk} = int div f_l(x)  psi_kappa[ line-charge of n x f_k ](x) dA(x),
/// panel potentials by analytic static part + smooth remainder quadrature.
MatC assemble_ldk(const CurrentSpace& space, cd kappa, const LineTables& lt);

} // namespace ssie::detail
