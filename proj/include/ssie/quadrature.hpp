// Triangle quadrature: regular rules on a single triangle plus regularizing
// coordinate-transform rules for singular/near-singular triangle pairs.
//
// "order" always means Gauss points per parameter dimension of the collapsed
// (square-to-triangle) map; an order-q regular rule has q*q points and
// integrates bivariate polynomials of total degree <= 2q-2 exactly.
// Exception: order 1 is the one-point centroid rule (weight 1), exact for
// affine integrands.
//
// Pair rules: triangle pairs are classified by their number of shared
// vertices (0 separated, 1 common vertex, 2 common edge, 3 identical).
// Touching pairs use the standard relative-coordinate singularity-removing
// transforms (2, 5 and 6 subdomains); separated pairs use the symmetric
// product of two single-triangle rules, which makes symmetric-kernel
// contributions exactly symmetric under pair swap.
#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "ssie/types.hpp"

namespace ssie {

/// Single-triangle rule in barycentric coordinates; weights sum to 1, so the
/// physical integral is  Area * sum_i w_i f(x_i).
struct QuadratureRule {
    std::vector<std::array<double, 3>> bary;
    std::vector<double> w;
    int size() const { return static_cast<int>(w.size()); }
};

/// Order-q collapsed Gauss rule (q in 1..20); see header comment for the
/// exactness degree.  Throws on out-of-range order.
QuadratureRule regular_rule(int order);

/// Gauss-Legendre rule mapped to [0,1]: n points (ascending) and weights
/// (summing to 1).
std::pair<std::vector<double>, std::vector<double>> gauss01_rule(int n);

/// Quadrature for a triangle-pair integral in the two triangles' reference
/// coordinates (u,v) with u+v<=1; weights are normalized so that the physical
/// integral is  4*A1*A2 * sum_i w_i K(x_i, y_i).
struct PairRule {
    std::vector<double> u1, v1, u2, v2, w;
    int size() const { return static_cast<int>(w.size()); }
};

/// Singularity-removing pair rule for `shared` common vertices (0..3) at the
/// given order.  Cached; the returned reference stays valid for the process
/// lifetime.  Rules are read-only after construction and safe to share across
/// threads; call prewarm_pair_rules() before using them from several threads.
const PairRule& pair_rule(int shared, int order);

/// Generate and cache all four pair-rule cases for the given orders.
void prewarm_pair_rules(int regular_order, int singular_order);

/// Scheme knobs for pair integration (orders as defined above).
struct PairScheme {
    int regular_order  = 4;
    int near_order     = 6;
    int singular_order = 8;
    double near_factor = 0.5;   // "near" if centroid distance < near_factor * mean diameter
};

/// Number of coincident vertices of two vertex triples (exact comparison).
int count_shared_vertices(const std::array<Vec3, 3>& T1, const std::array<Vec3, 3>& T2);

/// Integrate K(x,y) over a pair of triangles given by their vertex triples,
/// classifying the pair and choosing the rule per `scheme`.
cd integrate_pair(const std::array<Vec3, 3>& T1, const std::array<Vec3, 3>& T2,
                  const std::function<cd(const Vec3&, const Vec3&)>& kernel,
                  const PairScheme& scheme);

} // namespace ssie
