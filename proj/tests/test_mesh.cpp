// Surface-mesh ingestion/validation and the div-conforming edge-element
// space: file readers, closed-surface invariants, orientation repair,
// icosphere generator, and basis-function conformity.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ssie/mesh.hpp"

using namespace ssie;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/ssie_mesh_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

const char* octahedron_off =
    "OFF\n"
    "6 8 12\n"
    "1 0 0\n-1 0 0\n0 1 0\n0 -1 0\n0 0 1\n0 0 -1\n"
    "3 0 2 4\n3 2 1 4\n3 1 3 4\n3 3 0 4\n"
    "3 2 0 5\n3 1 2 5\n3 3 1 5\n3 0 3 5\n";

std::vector<Vec3> octa_verts() {
    return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}
std::vector<std::array<int, 3>> octa_tris() {
    return {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
            {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
}

} // namespace

TEST_CASE("octahedron OFF file loads with the expected counts and invariants") {
    const std::string path = write_temp("octa.off", octahedron_off);
    const SurfaceMesh m = load_mesh(path);
    CHECK(m.n_verts() == 6);
    CHECK(m.n_tris() == 8);
    CHECK(m.n_edges() == 12);
    CHECK(m.n_verts() - m.n_edges() + m.n_tris() == 2);  // Euler characteristic
    CHECK(m.signed_volume() > 0.0);
    for (int t = 0; t < m.n_tris(); ++t) {
        CHECK(m.area[t] > 0.0);
        CHECK(m.normal[t].norm() == doctest::Approx(1.0).epsilon(1e-12));
        // convex body centered at the origin: outward normal leaves the centroid
        CHECK(m.normal[t].dot(m.centroid(t)) > 0.0);
    }
    CHECK(m.signed_volume() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("format auto-detection and explicit format agree") {
    const std::string path = write_temp("octa2.off", octahedron_off);
    const SurfaceMesh a = load_mesh(path, MeshFormat::auto_detect);
    const SurfaceMesh b = load_mesh(path, MeshFormat::off);
    REQUIRE(a.n_tris() == b.n_tris());
    CHECK(a.verts[3] == b.verts[3]);
}

TEST_CASE("gmsh v2 reader produces the same octahedron") {
    std::string g = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n6\n";
    const auto vs = octa_verts();
    for (size_t i = 0; i < vs.size(); ++i)
        g += std::to_string(i + 1) + " " + std::to_string(vs[i].x()) + " " +
             std::to_string(vs[i].y()) + " " + std::to_string(vs[i].z()) + "\n";
    g += "$EndNodes\n$Elements\n9\n1 15 2 0 1 1\n";  // a point element, skipped
    const auto ts = octa_tris();
    for (size_t i = 0; i < ts.size(); ++i)
        g += std::to_string(i + 2) + " 2 2 0 1 " + std::to_string(ts[i][0] + 1) + " " +
             std::to_string(ts[i][1] + 1) + " " + std::to_string(ts[i][2] + 1) + "\n";
    g += "$EndElements\n";
    const std::string path = write_temp("octa.msh", g);
    const SurfaceMesh m = load_mesh(path, MeshFormat::gmsh_v2);
    CHECK(m.n_verts() == 6);
    CHECK(m.n_tris() == 8);
    CHECK(m.signed_volume() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("parse failures are reported") {
    CHECK_THROWS_AS(load_mesh("/tmp/ssie_mesh_does_not_exist.off"), std::runtime_error);
    CHECK_THROWS_AS(load_mesh(write_temp("bad.off", "not a mesh\n")), std::runtime_error);
    CHECK_THROWS_AS(load_mesh(write_temp("trunc.off", "OFF\n6 8 12\n1 0 0\n")),
                    std::runtime_error);
    CHECK_THROWS_AS(load_mesh(write_temp("quad.off", "OFF\n4 1 4\n0 0 0\n1 0 0\n1 1 0\n"
                                                     "0 1 0\n4 0 1 2 3\n")),
                    std::runtime_error);
}

TEST_CASE("orientation repair fixes flipped triangles") {
    auto tris = octa_tris();
    std::swap(tris[2][0], tris[2][1]);  // invert one triangle
    std::swap(tris[6][0], tris[6][1]);
    const SurfaceMesh m = finalize_mesh(octa_verts(), tris);
    CHECK(m.signed_volume() > 0.0);
    for (int t = 0; t < m.n_tris(); ++t) CHECK(m.normal[t].dot(m.centroid(t)) > 0.0);
}

TEST_CASE("globally inverted input is flipped outward") {
    auto tris = octa_tris();
    for (auto& f : tris) std::swap(f[0], f[1]);  // consistently inward
    const SurfaceMesh m = finalize_mesh(octa_verts(), tris);
    CHECK(m.signed_volume() > 0.0);
}

TEST_CASE("non-manifold, open, and degenerate inputs are rejected") {
    auto verts = octa_verts();
    auto tris = octa_tris();
    tris.push_back({0, 2, 5});  // third triangle on edge (0,2)
    CHECK_THROWS_WITH_AS(static_cast<void>(finalize_mesh(verts, tris)),
                         doctest::Contains("non-manifold"), std::runtime_error);

    tris = octa_tris();
    tris.pop_back();  // open surface: boundary edges remain
    CHECK_THROWS_AS(static_cast<void>(finalize_mesh(verts, tris)), std::runtime_error);

    tris = octa_tris();
    tris[0] = {0, 2, 2};  // repeated vertex
    CHECK_THROWS_AS(static_cast<void>(finalize_mesh(verts, tris)), std::runtime_error);

    verts = octa_verts();
    verts.push_back(verts[4]);  // duplicate of the apex
    tris = octa_tris();
    tris[0] = {0, 2, 6};        // zero... sliver triangle against the duplicate
    CHECK_THROWS_AS(static_cast<void>(finalize_mesh(verts, tris)), std::runtime_error);
}

TEST_CASE("non-spherical topology is rejected") {
    // triangulated torus: 6 x 4 parameter grid
    const int NU = 6, NV = 4;
    std::vector<Vec3> verts;
    for (int i = 0; i < NU; ++i)
        for (int j = 0; j < NV; ++j) {
            const double u = 2.0 * pi * i / NU, v = 2.0 * pi * j / NV;
            const double w = 2.0 + 0.5 * std::cos(v);
            verts.emplace_back(w * std::cos(u), w * std::sin(u), 0.5 * std::sin(v));
        }
    std::vector<std::array<int, 3>> tris;
    auto id = [&](int i, int j) { return (i % NU) * NV + (j % NV); };
    for (int i = 0; i < NU; ++i)
        for (int j = 0; j < NV; ++j) {
            tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    CHECK_THROWS_WITH_AS(static_cast<void>(finalize_mesh(verts, tris)),
                         doctest::Contains("Euler"), std::runtime_error);
}

TEST_CASE("icosphere generator: counts, projection, area convergence") {
    const SurfaceMesh ico0 = make_icosphere(0, 1.0);
    CHECK(ico0.n_tris() == 20);
    CHECK(ico0.n_verts() == 12);

    const SurfaceMesh ico2 = make_icosphere(2, 1.0);
    CHECK(ico2.n_tris() == 320);
    CHECK(ico2.n_edges() == 480);
    CHECK(ico2.n_verts() == 162);
    double rdev = 0.0;
    for (const Vec3& v : ico2.verts) rdev = std::max(rdev, std::abs(v.norm() - 1.0));
    CHECK(rdev < 1e-14);
    // box diagonal: subdivision creates vertices exactly on all six axis poles
    CHECK(ico2.bounding_diameter() == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));

    const SurfaceMesh big = make_icosphere(3, 2.0);
    CHECK(std::abs(big.total_area() - 4.0 * pi * 4.0) / (16.0 * pi) < 0.005);
    CHECK(big.max_diameter() < 0.5);

    CHECK_THROWS_AS(make_icosphere(8, 1.0), std::runtime_error);
    CHECK_THROWS_AS(make_icosphere(2, -1.0), std::runtime_error);
}

TEST_CASE("current space: dof count equals edge count") {
    const CurrentSpace octa = build_current_space(finalize_mesh(octa_verts(), octa_tris()));
    CHECK(octa.n_dof == 12);
    const CurrentSpace ico = build_current_space(make_icosphere(2, 1.0));
    CHECK(ico.n_dof == 480);
    CHECK(static_cast<int>(ico.edge_len.size()) == 480);
}

TEST_CASE("edge functions are tangential with zero total divergence") {
    const CurrentSpace sp = build_current_space(make_icosphere(1, 1.0));
    std::vector<double> div_int(sp.n_dof, 0.0);
    for (int t = 0; t < sp.mesh.n_tris(); ++t)
        for (int loc = 0; loc < 3; ++loc) {
            const int e = sp.tri_edge[t][loc];
            div_int[e] += sp.basis_div(t, loc) * sp.mesh.area[t];
            const Vec3 f = sp.basis_at(t, loc, sp.mesh.centroid(t));
            CHECK(std::abs(f.dot(sp.mesh.normal[t])) < 1e-12);
        }
    for (int e = 0; e < sp.n_dof; ++e) CHECK(std::abs(div_int[e]) <= 1e-12 * sp.edge_len[e]);
}

TEST_CASE("edge functions are div-conforming: normal flux continuous across the edge") {
    const CurrentSpace sp = build_current_space(make_icosphere(1, 1.0));
    const SurfaceMesh& m = sp.mesh;
    // collect the two (triangle, slot) incidences of every edge
    std::vector<std::vector<std::pair<int, int>>> inc(sp.n_dof);
    for (int t = 0; t < m.n_tris(); ++t)
        for (int loc = 0; loc < 3; ++loc) inc[sp.tri_edge[t][loc]].push_back({t, loc});
    for (int e = 0; e < sp.n_dof; ++e) {
        REQUIRE(inc[e].size() == 2);
        const Vec3 a = m.verts[sp.edge_vert[e][0]], b = m.verts[sp.edge_vert[e][1]];
        const Vec3 mid = 0.5 * (a + b), tangent = (b - a).normalized();
        double flux[2];
        for (int s = 0; s < 2; ++s) {
            const auto [t, loc] = inc[e][s];
            Vec3 nu = tangent.cross(m.normal[t]);  // in-plane edge normal
            if (nu.dot(mid - m.centroid(t)) < 0.0) nu = -nu;  // point out of the triangle
            flux[s] = sp.basis_at(t, loc, mid).dot(nu);
        }
        CHECK(std::abs(flux[0] + flux[1]) < 1e-12);  // outflow on one side = inflow on other
        CHECK(std::abs(flux[0]) > 0.1);              // and the flux is genuinely nonzero
    }
}

TEST_CASE("per-triangle divergence matches the analytic piecewise-constant value") {
    const CurrentSpace sp = build_current_space(finalize_mesh(octa_verts(), octa_tris()));
    const SurfaceMesh& m = sp.mesh;
    for (int t = 0; t < m.n_tris(); ++t)
        for (int loc = 0; loc < 3; ++loc) {
            const double want =
                sp.tri_sign[t][loc] * sp.edge_len[sp.tri_edge[t][loc]] / m.area[t];
            CHECK(sp.basis_div(t, loc) == doctest::Approx(want).epsilon(1e-14));
            // divergence theorem on the triangle: total outflow is through the
            // opposite edge only, with magnitude sign * length
            const double outflow = sp.basis_div(t, loc) * m.area[t];
            CHECK(std::abs(std::abs(outflow) - sp.edge_len[sp.tri_edge[t][loc]]) < 1e-12);
        }
}
