// The four single-source boundary systems and their parameter validation.
//
// System matrices are polynomial combinations of the assembled operator
// blocks; every operator-operator product is Gram-mediated (left factor in
// its rotated-density variant, then mass-inverse, then right factor), and
// identity factors collapse exactly (composition with Id inserts nothing).
// Monomials are independent of the coupling constants (a, b) and of rho, so
// they are cached in the OperatorSet and shared between formulation kinds.
#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "ssie/kernels.hpp"
#include "ssie/linalg.hpp"
#include "ssie/mesh.hpp"
#include "ssie/operators.hpp"
#include "ssie/types.hpp"

namespace ssie {

/// Interior/exterior material pair; wavenumbers derived as omega*sqrt(eps*mu)
/// on the branch with nonnegative imaginary part.
struct MediumPair {
    cd eps_i{1.0, 0.0}, mu_i{1.0, 0.0};
    cd eps_e{1.0, 0.0}, mu_e{1.0, 0.0};
    double omega = 1.0;

    cd kappa_i() const;
    cd kappa_e() const;
    cd rho() const;    // mu_e kappa_i / (mu_i kappa_e)

    /// Convenience builder: prescribe the wavenumbers directly (omega = 1,
    /// permittivities derived as kappa^2 / mu).
    static MediumPair from_wavenumbers(cd kappa_e, cd kappa_i, cd mu_e = 1.0, cd mu_i = 1.0);
};

struct CouplingParams {
    cd a{1.0, 0.0};
    cd b{0.0, 1.0};   // recommended family a = 1, b = i*eta
    double eta = 1.0;
};

enum class FormulationKind { S, T, Sprime, Tprime };

std::string to_string(FormulationKind k);

struct ValidationReport {
    bool uniqueness_ok = false;           // transmission-uniqueness conditions
    bool interior_eigen_excluded = false; // interior-eigenvalue exclusion conditions
    bool fredholm_ok = false;             // nonvanishing Fredholm factors (both families)
    bool lipschitz_garding_ok = false;    // invertibility family (or strict positivity form)
    std::vector<std::string> messages;

    bool all_ok() const {
        return uniqueness_ok && interior_eigen_excluded && fredholm_ok && lipschitz_garding_ok;
    }
};

/// Evaluate every theorem inequality explicitly (tolerance 1e-12 relative for
/// nonvanishing checks).  Advisory: failures are reported, never fatal here.
ValidationReport validate_params(const MediumPair& med, const CouplingParams& cp,
                                 bool lipschitz_mode = false);

/// Assembled operator bundle for one medium pair on one space, with cached
/// Gram factorization and lazily cached Gram-mediated monomials.
struct OperatorSet {
    const CurrentSpace* space = nullptr;
    MediumPair med;
    StaticKernels st;
    OperatorBlocks ext, itr;              // blocks at kappa_e, kappa_i
    MatC U0, Ux0;                         // static combined blocks
    Eigen::LLT<MatX> mass_llt;
    mutable std::map<std::string, MatC> monomial_cache;

    const MatC& mono(const std::string& key) const; // lazily built product
};

OperatorSet assemble_operator_set(const CurrentSpace& space, const MediumPair& med,
                                  const AssemblyOptions& opt = {});

/// Rebind the per-kappa blocks for a new medium pair, reusing the static
/// kernels and Gram factorization (used by wavenumber sweeps).
void rebind_operator_set(OperatorSet& ops, const MediumPair& med, const AssemblyOptions& opt = {});

/// L_e and N_e ansatz matrices (exterior Calderon data of the single-source
/// ansatz).  Identity terms materialize as the pairing Gram.
std::pair<MatC, MatC> build_Le_Ne(const MediumPair& med, const CouplingParams& cp,
                                  const OperatorSet& ops);

struct LinearSystem {
    FormulationKind kind;
    MatC A;
    VecC rhs;
};

LinearSystem build_system(FormulationKind kind, const MediumPair& med, const CouplingParams& cp,
                          const OperatorSet& ops, const PlaneWave& wave);

struct SolveMethod {
    enum class Type { lu, gmres } type = Type::lu;
    double tol = 1e-12;
    int maxit = 1000;
};

struct SolveResult {
    VecC coefficients;
    double residual = 0.0;     // relative ||Ax - b|| / ||b||
    int iterations = 0;        // gmres only
};

/// Direct or iterative solve; verifies the achieved residual and throws
/// (with a condition estimate in the message) on singular/non-convergent
/// systems.
SolveResult solve(const MatC& A, const VecC& rhs, const SolveMethod& method = {});
SolveResult solve(const LinearSystem& system, const SolveMethod& method = {});

} // namespace ssie
