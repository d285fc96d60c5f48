// Oriented closed triangulated surfaces and the div-conforming edge-element
// space living on them.
//
// Conventions fixed here and relied upon everywhere else:
//  * triangle local edge slots are numbered by the OPPOSITE vertex:
//      slot 0 = (v1,v2), slot 1 = (v2,v0), slot 2 = (v0,v1);
//  * a global edge is the unordered vertex pair, stored canonically as
//    (min,max); the triangle in which the directed pair (min -> max) runs
//    counter-clockwise is the "+" side of the edge function;
//  * the edge function on a triangle is  s * L/(2A) * (x - p_opp), with
//    surface divergence  s * L/A,  s = +-1 the side sign.
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssie/types.hpp"

namespace ssie {

enum class MeshFormat { auto_detect, gmsh_v2, off };

struct SurfaceMesh {
    std::vector<Vec3>                verts;
    std::vector<std::array<int, 3>>  tris;
    std::vector<Vec3>                normal;   // per-triangle outward unit normal
    std::vector<double>              area;     // per-triangle area (> 0)

    int n_verts() const { return static_cast<int>(verts.size()); }
    int n_tris()  const { return static_cast<int>(tris.size()); }
    int n_edges() const;                       // counted from the triangle list

    Vec3 centroid(int t) const {
        const auto& f = tris[t];
        return (verts[f[0]] + verts[f[1]] + verts[f[2]]) / 3.0;
    }
    double max_diameter() const;               // longest edge in the mesh
    double bounding_diameter() const;          // diameter of the vertex set
    double signed_volume() const;
    double total_area() const;
};

/// Parse a surface mesh from disk, repair orientation, verify all closed-
/// surface invariants.  Throws std::runtime_error with a descriptive message
/// on parse failure, non-manifold edges, unrepairable orientation, or
/// non-genus-0 topology.
SurfaceMesh load_mesh(const std::string& path, MeshFormat format = MeshFormat::auto_detect);

/// Build a mesh from raw arrays, running the same repair + validation as
/// load_mesh.  Used by the file readers and by tests that construct meshes.
SurfaceMesh finalize_mesh(std::vector<Vec3> verts, std::vector<std::array<int, 3>> tris);

/// Icosahedron refined `subdivisions` times (0..7), vertices projected onto
/// the sphere of the given radius.
SurfaceMesh make_icosphere(int subdivisions, double radius);

// ----------------------------------------------------------------------------
// div-conforming edge-element space
// ----------------------------------------------------------------------------

struct CurrentSpace {
    SurfaceMesh mesh;
    int n_dof = 0;                                  // = number of edges

    // per-triangle slot tables (n_tris x 3)
    std::vector<std::array<int, 3>>    tri_edge;    // global edge id per slot
    std::vector<std::array<double, 3>> tri_sign;    // +-1 side sign per slot
    // per-edge tables (n_dof)
    std::vector<std::array<int, 2>>    edge_vert;   // canonical (min,max) vertex pair
    std::vector<double>                edge_len;

    /// Edge-function value at point x on triangle t, local slot `loc`.
    Vec3 basis_at(int t, int loc, const Vec3& x) const {
        const double s = tri_sign[t][loc];
        const double L = edge_len[tri_edge[t][loc]];
        return (s * L / (2.0 * mesh.area[t])) * (x - mesh.verts[mesh.tris[t][loc]]);
    }
    /// Surface divergence of the slot `loc` edge function on triangle t.
    double basis_div(int t, int loc) const {
        return tri_sign[t][loc] * edge_len[tri_edge[t][loc]] / mesh.area[t];
    }
};

CurrentSpace build_current_space(const SurfaceMesh& mesh);

} // namespace ssie
