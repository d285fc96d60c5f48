#include "ssie/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>

namespace ssie {

// ----------------------------------------------------------------- SurfaceMesh

int SurfaceMesh::n_edges() const {
    std::map<std::pair<int, int>, int> seen;
    for (const auto& f : tris)
        for (int e = 0; e < 3; ++e) {
            int a = f[e], b = f[(e + 1) % 3];
            seen[{std::min(a, b), std::max(a, b)}]++;
        }
    return static_cast<int>(seen.size());
}

double SurfaceMesh::max_diameter() const {
    double h = 0.0;
    for (const auto& f : tris)
        for (int e = 0; e < 3; ++e)
            h = std::max(h, (verts[f[e]] - verts[f[(e + 1) % 3]]).norm());
    return h;
}

double SurfaceMesh::bounding_diameter() const {
    Vec3 lo = verts[0], hi = verts[0];
    for (const auto& v : verts) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return (hi - lo).norm();
}

double SurfaceMesh::signed_volume() const {
    double v6 = 0.0;
    for (const auto& f : tris)
        v6 += verts[f[0]].dot(verts[f[1]].cross(verts[f[2]]));
    return v6 / 6.0;
}

double SurfaceMesh::total_area() const {
    double a = 0.0;
    for (double t : area) a += t;
    return a;
}

// ------------------------------------------------------------ repair/validate

namespace {

void compute_metrics(SurfaceMesh& m) {
    m.normal.resize(m.tris.size());
    m.area.resize(m.tris.size());
    for (size_t t = 0; t < m.tris.size(); ++t) {
        const auto& f = m.tris[t];
        Vec3 n = (m.verts[f[1]] - m.verts[f[0]]).cross(m.verts[f[2]] - m.verts[f[0]]);
        double a2 = n.norm();
        if (a2 <= 0.0)
            throw std::runtime_error("mesh: degenerate (zero-area) triangle " + std::to_string(t));
        m.area[t] = a2 / 2.0;
        m.normal[t] = n / a2;
    }
}

} // namespace

SurfaceMesh finalize_mesh(std::vector<Vec3> verts, std::vector<std::array<int, 3>> tris) {
    if (tris.empty()) throw std::runtime_error("mesh: no triangles");
    for (const auto& f : tris)
        for (int v : f)
            if (v < 0 || v >= static_cast<int>(verts.size()))
                throw std::runtime_error("mesh: triangle refers to nonexistent vertex");

    // edge -> incident triangles
    std::map<std::pair<int, int>, std::vector<int>> e2t;
    for (size_t t = 0; t < tris.size(); ++t)
        for (int e = 0; e < 3; ++e) {
            int a = tris[t][e], b = tris[t][(e + 1) % 3];
            if (a == b) throw std::runtime_error("mesh: degenerate edge in triangle " + std::to_string(t));
            e2t[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(t));
        }
    for (const auto& [e, ts] : e2t)
        if (ts.size() != 2)
            throw std::runtime_error("mesh: non-manifold or boundary edge (" + std::to_string(e.first) +
                                     "," + std::to_string(e.second) + ") with " +
                                     std::to_string(ts.size()) + " incident triangles");

    // BFS orientation repair: neighbors must traverse the shared edge in
    // opposite directions.
    auto has_directed = [&](int t, int a, int b) {
        for (int e = 0; e < 3; ++e)
            if (tris[t][e] == a && tris[t][(e + 1) % 3] == b) return true;
        return false;
    };
    std::vector<int> state(tris.size(), 0); // 0 unseen, 1 queued/visited
    std::deque<int> queue{0};
    state[0] = 1;
    size_t visited = 1;
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        for (int e = 0; e < 3; ++e) {
            int a = tris[t][e], b = tris[t][(e + 1) % 3];
            const auto& ts = e2t[{std::min(a, b), std::max(a, b)}];
            int u = ts[0] == t ? ts[1] : ts[0];
            bool consistent = has_directed(u, b, a); // opposite direction
            if (state[u] == 0) {
                if (!consistent) std::swap(tris[u][1], tris[u][2]);
                state[u] = 1;
                ++visited;
                queue.push_back(u);
            } else if (!consistent) {
                throw std::runtime_error("mesh: inconsistent orientation (not repairable by flips)");
            }
        }
    }
    if (visited != tris.size())
        throw std::runtime_error("mesh: surface is not connected");

    int V = static_cast<int>(verts.size());
    int F = static_cast<int>(tris.size());
    int E = static_cast<int>(e2t.size());
    if (V - E + F != 2)
        throw std::runtime_error("mesh: Euler characteristic " + std::to_string(V - E + F) +
                                 " != 2 (only genus-0 closed surfaces are accepted)");

    SurfaceMesh m;
    m.verts = std::move(verts);
    m.tris = std::move(tris);
    // outward orientation: enclosed volume must be positive
    if (m.signed_volume() < 0.0)
        for (auto& f : m.tris) std::swap(f[1], f[2]);
    compute_metrics(m);
    return m;
}

// ------------------------------------------------------------------- readers

namespace {

SurfaceMesh read_off(std::istream& in) {
    std::string tok;
    if (!(in >> tok) || tok != "OFF") throw std::runtime_error("off: missing OFF header");
    long nv = 0, nf = 0, ne = 0;
    if (!(in >> nv >> nf >> ne)) throw std::runtime_error("off: bad count line");
    std::vector<Vec3> verts(nv);
    for (long i = 0; i < nv; ++i)
        if (!(in >> verts[i][0] >> verts[i][1] >> verts[i][2]))
            throw std::runtime_error("off: bad vertex line " + std::to_string(i));
    std::vector<std::array<int, 3>> tris;
    tris.reserve(nf);
    for (long i = 0; i < nf; ++i) {
        int k = 0;
        if (!(in >> k) || k != 3)
            throw std::runtime_error("off: only triangle faces supported (face " + std::to_string(i) + ")");
        std::array<int, 3> f{};
        if (!(in >> f[0] >> f[1] >> f[2]))
            throw std::runtime_error("off: bad face line " + std::to_string(i));
        tris.push_back(f);
    }
    return finalize_mesh(std::move(verts), std::move(tris));
}

SurfaceMesh read_gmsh_v2(std::istream& in) {
    std::string line;
    std::map<long, int> id_map;
    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> tris;
    bool saw_nodes = false, saw_elems = false;
    while (std::getline(in, line)) {
        if (line.rfind("$MeshFormat", 0) == 0) {
            std::getline(in, line);
            std::istringstream ls(line);
            double ver = 0;
            ls >> ver;
            if (ver < 2.0 || ver >= 3.0)
                throw std::runtime_error("gmsh: unsupported format version " + line);
        } else if (line.rfind("$Nodes", 0) == 0) {
            saw_nodes = true;
            std::getline(in, line);
            long n = std::stol(line);
            for (long i = 0; i < n; ++i) {
                std::getline(in, line);
                std::istringstream ls(line);
                long id;
                Vec3 p;
                if (!(ls >> id >> p[0] >> p[1] >> p[2]))
                    throw std::runtime_error("gmsh: bad node line: " + line);
                id_map[id] = static_cast<int>(verts.size());
                verts.push_back(p);
            }
        } else if (line.rfind("$Elements", 0) == 0) {
            saw_elems = true;
            std::getline(in, line);
            long n = std::stol(line);
            for (long i = 0; i < n; ++i) {
                std::getline(in, line);
                std::istringstream ls(line);
                long id, type, ntags;
                if (!(ls >> id >> type >> ntags))
                    throw std::runtime_error("gmsh: bad element line: " + line);
                long tag;
                for (long k = 0; k < ntags; ++k) ls >> tag;
                if (type == 2) { // 3-node triangle
                    long a, b, c;
                    if (!(ls >> a >> b >> c))
                        throw std::runtime_error("gmsh: bad triangle: " + line);
                    tris.push_back({id_map.at(a), id_map.at(b), id_map.at(c)});
                }
                // other element types (points, lines) are skipped
            }
        }
    }
    if (!saw_nodes || !saw_elems)
        throw std::runtime_error("gmsh: missing $Nodes or $Elements section");
    return finalize_mesh(std::move(verts), std::move(tris));
}

} // namespace

SurfaceMesh load_mesh(const std::string& path, MeshFormat format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("mesh: cannot open file: " + path);
    if (format == MeshFormat::auto_detect) {
        auto dot = path.rfind('.');
        std::string ext = dot == std::string::npos ? "" : path.substr(dot);
        if (ext == ".off") format = MeshFormat::off;
        else if (ext == ".msh") format = MeshFormat::gmsh_v2;
        else {
            std::string head;
            in >> head;
            in.seekg(0);
            format = (head == "OFF") ? MeshFormat::off : MeshFormat::gmsh_v2;
        }
    }
    return format == MeshFormat::off ? read_off(in) : read_gmsh_v2(in);
}

// ------------------------------------------------------------------ icosphere

SurfaceMesh make_icosphere(int subdivisions, double radius) {
    if (subdivisions < 0 || subdivisions > 7)
        throw std::runtime_error("make_icosphere: subdivisions must be in 0..7");
    if (!(radius > 0.0)) throw std::runtime_error("make_icosphere: radius must be > 0");

    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& p : v) p.normalize();
    std::vector<std::array<int, 3>> f = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};

    for (int lev = 0; lev < subdivisions; ++lev) {
        std::map<std::pair<int, int>, int> cache;
        auto mid = [&](int i, int j) {
            auto key = std::make_pair(std::min(i, j), std::max(i, j));
            auto it = cache.find(key);
            if (it != cache.end()) return it->second;
            Vec3 m = ((v[i] + v[j]) / 2.0).normalized();
            int id = static_cast<int>(v.size());
            v.push_back(m);
            cache[key] = id;
            return id;
        };
        std::vector<std::array<int, 3>> nf;
        nf.reserve(4 * f.size());
        for (const auto& [a, b, c] : f) {
            int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
            nf.push_back({a, ab, ca});
            nf.push_back({b, bc, ab});
            nf.push_back({c, ca, bc});
            nf.push_back({ab, bc, ca});
        }
        f = std::move(nf);
    }
    for (auto& p : v) p *= radius;
    return finalize_mesh(std::move(v), std::move(f));
}

// -------------------------------------------------------------- CurrentSpace

CurrentSpace build_current_space(const SurfaceMesh& mesh) {
    CurrentSpace sp;
    sp.mesh = mesh;
    const int nT = mesh.n_tris();
    sp.tri_edge.resize(nT);
    sp.tri_sign.resize(nT);
    std::map<std::pair<int, int>, int> edges;
    for (int t = 0; t < nT; ++t) {
        const auto& f = mesh.tris[t];
        const int pq[3][2] = {{f[1], f[2]}, {f[2], f[0]}, {f[0], f[1]}};
        for (int loc = 0; loc < 3; ++loc) {
            int p = pq[loc][0], q = pq[loc][1];
            auto key = std::make_pair(std::min(p, q), std::max(p, q));
            auto [it, inserted] = edges.try_emplace(key, static_cast<int>(edges.size()));
            sp.tri_edge[t][loc] = it->second;
            sp.tri_sign[t][loc] = (p < q) ? 1.0 : -1.0; // "+" side: (min->max) runs ccw here
        }
    }
    sp.n_dof = static_cast<int>(edges.size());
    sp.edge_vert.resize(sp.n_dof);
    sp.edge_len.resize(sp.n_dof);
    for (const auto& [key, id] : edges) {
        sp.edge_vert[id] = {key.first, key.second};
        sp.edge_len[id] = (mesh.verts[key.first] - mesh.verts[key.second]).norm();
    }
    return sp;
}

} // namespace ssie
