// Field reconstruction: layer potentials of edge-element densities, the
// interior/exterior representations attached to each formulation, far-field
// patterns, and the radiation-condition diagnostic.
//
// All coefficient vectors follow the library-wide stripped convention (see
// kernels.hpp): a vector holds plain tangential components, and operators or
// potentials that act on a rotated density apply the n x . rotation
// internally.  Off-surface curls use the exact potential swap
//   curl Psi_E = kappa Psi_M,   curl Psi_M = kappa Psi_E,
// so one term list per side yields the field, its curl, and the far field.
#pragma once

#include <memory>
#include <vector>

#include "ssie/formulations.hpp"
#include "ssie/kernels.hpp"
#include "ssie/mesh.hpp"
#include "ssie/mie.hpp"   // FarFieldPattern
#include "ssie/types.hpp"

namespace ssie {

/// A solved boundary density with the semantic tag that selects which
/// reconstruction formulas apply to it.
struct SurfaceDensity {
    enum class Tag { j_for_S_T, j_for_Sprime, m_for_Tprime };

    const CurrentSpace* space = nullptr;
    VecC coefficients;
    Tag tag = Tag::j_for_S_T;
};

/// Tag demanded by each formulation kind.
SurfaceDensity::Tag density_tag_for(FormulationKind kind);

/// Off-surface evaluator for the electric/magnetic potentials of one space.
/// Evaluation is pure per point; near-surface points trigger adaptive panel
/// subdivision, and points closer than 1e-6 x (mesh bounding diameter) are
/// rejected.
class PotentialEvaluator {
public:
    explicit PotentialEvaluator(const CurrentSpace& space);
    ~PotentialEvaluator();
    PotentialEvaluator(PotentialEvaluator&&) noexcept;
    PotentialEvaluator& operator=(PotentialEvaluator&&) noexcept;

    /// One density to evaluate; rotated means the density is n x w.
    struct DensityRequest {
        const VecC* w;
        bool rotated = false;
    };
    struct PotentialPair {
        Eigen::Vector3cd electric = Eigen::Vector3cd::Zero();
        Eigen::Vector3cd magnetic = Eigen::Vector3cd::Zero();
    };

    /// Psi_E and Psi_M of every requested density at one point, sharing the
    /// kernel evaluations and the adaptive panel quadrature across requests.
    std::vector<PotentialPair> evaluate(const std::vector<DensityRequest>& requests, cd kappa,
                                        const Vec3& x) const;

    /// Psi_E / Psi_M applied to the edge-element density with coefficients w.
    Eigen::Vector3cd electric(const VecC& w, cd kappa, const Vec3& x) const;
    Eigen::Vector3cd magnetic(const VecC& w, cd kappa, const Vec3& x) const;

    /// Psi_E / Psi_M applied to the rotated density n x w (w in the stripped
    /// convention).  The electric one carries the line-charge part of
    /// div_Gamma(n x w) explicitly.
    Eigen::Vector3cd electric_rot(const VecC& w, cd kappa, const Vec3& x) const;
    Eigen::Vector3cd magnetic_rot(const VecC& w, cd kappa, const Vec3& x) const;

    /// Radiating far-field amplitudes of the same four potentials, in the
    /// normalization  E(x) ~ e^{i kappa |x|}/|x| E^inf(xhat).
    Eigen::Vector3cd far_electric(const VecC& w, cd kappa, const Vec3& xhat, bool rotated) const;
    Eigen::Vector3cd far_magnetic(const VecC& w, cd kappa, const Vec3& xhat, bool rotated) const;

    /// Exact distance from x to the surface.
    double distance(const Vec3& x) const;
    double diameter() const;   // bounding diameter of the mesh

    const CurrentSpace& space() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// -Psi_E j_E - Psi_M j_M at the given points (the Stratton-Chu shape: j_E
/// and j_M are trace coefficient vectors in the stripped convention, so both
/// potentials act on the rotated densities).  Throws if a point violates the
/// distance precondition.
std::vector<Eigen::Vector3cd> eval_potentials(const SurfaceDensity& j_e,
                                              const SurfaceDensity& j_m, cd kappa,
                                              const std::vector<Vec3>& points);

/// Interior + exterior representation of a solved density for one
/// formulation.  Built once (the auxiliary coefficient vectors are Gram
/// solves and operator applications); evaluation is per point.
class FieldEvaluator {
public:
    Eigen::Vector3cd interior(const Vec3& x) const;
    Eigen::Vector3cd interior_curl(const Vec3& x) const;
    /// Scattered exterior field (add the incident wave for the total field).
    Eigen::Vector3cd scattered(const Vec3& x) const;
    Eigen::Vector3cd scattered_curl(const Vec3& x) const;

    /// Far-field pattern of the scattered representation; values are made
    /// tangential by construction (xhat x (value x xhat)).
    FarFieldPattern far_field(const std::vector<Vec3>& directions) const;

    const PotentialEvaluator& potentials() const { return *pot_; }
    cd kappa_e() const { return kappa_e_; }
    cd kappa_i() const { return kappa_i_; }

private:
    friend FieldEvaluator reconstruct(FormulationKind, const SurfaceDensity&, const MediumPair&,
                                      const CouplingParams&, const OperatorSet&, const PlaneWave&);
    struct Term {
        cd coef;
        VecC w;
        bool electric = true;  // Psi_E vs Psi_M
        bool rotated = false;  // density is n x w
        VecC w_near;           // rotated only: L2 reprojection of n x w onto
                               // the div-conforming space, used inside the
                               // near band (the rotated kernels develop an
                               // O(1) boundary layer there)
    };
    Eigen::Vector3cd eval_terms(const std::vector<Term>& terms, cd kappa, const Vec3& x,
                                bool curl) const;

    std::shared_ptr<const PotentialEvaluator> pot_;
    FormulationKind kind_ = FormulationKind::S;
    cd kappa_e_, kappa_i_;
    double near_dist_ = 0.0;   // switch radius for the reprojected evaluation
    std::vector<Term> interior_terms_, exterior_terms_;
};

/// Build the representation pair for a solved density.  Throws on a
/// density/kind tag mismatch, non-finite coefficients, or an operator set
/// bound to different wavenumbers.
FieldEvaluator reconstruct(FormulationKind kind, const SurfaceDensity& density,
                           const MediumPair& med, const CouplingParams& cp, const OperatorSet& ops,
                           const PlaneWave& wave);

/// Silver-Mueller radiation residual  int_{|x|=R} |curl E x xhat - i kappa E|^2
/// on a coarse sphere grid, one value per requested radius (decreasing in R
/// for a radiating representation).
std::vector<double> radiation_check(const FieldEvaluator& field, const std::vector<double>& radii);

} // namespace ssie
