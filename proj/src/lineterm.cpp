// Line-charge contribution of rotated basis fields.
//
// The surface divergence of n x f_k is zero inside each flat panel but
// carries a line density on panel boundaries; the tables below tabulate that
// density on per-edge Gauss points, and assemble_ldk integrates the resulting
// single-layer potential against div f_l.  Panel potentials use the analytic
// static integral plus quadrature of the smooth remainder (e^{ikr}-1)/(4 pi r).
#include <cmath>

#include "detail.hpp"
#include "ssie/quadrature.hpp"

namespace ssie::detail {

double tri_pot_static(const std::array<Vec3, 3>& V, const Vec3& nh, const Vec3& y) {
    const double d = (y - V[0]).dot(nh);
    const Vec3 rho = y - d * nh;
    const double ad = std::abs(d);
    double tot = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Vec3 &a = V[i], &b = V[(i + 1) % 3];
        const double L = (b - a).norm();
        const Vec3 lh = (b - a) / L;
        const Vec3 u = lh.cross(nh);
        const double P0 = (a - rho).dot(u);
        const double lm = (a - rho).dot(lh);
        const double lp = (b - rho).dot(lh);
        const double Rm = std::sqrt(P0 * P0 + d * d + lm * lm);
        const double Rp = std::sqrt(P0 * P0 + d * d + lp * lp);
        const double R02 = P0 * P0 + d * d;
        const double num = Rp + lp, den = Rm + lm;
        double logterm = 0.0;
        if (std::min(std::abs(num), std::abs(den)) >= 1e-14) logterm = std::log(num / den);
        const double t1 = (std::abs(P0) > 1e-14) ? P0 * logterm : 0.0;
        double t2 = 0.0;
        if (ad > 1e-14)
            t2 = ad * (std::atan2(P0 * lp, R02 + ad * Rp) - std::atan2(P0 * lm, R02 + ad * Rm));
        tot += t1 - t2;
    }
    return tot;
}

LineTables build_line_tables(const CurrentSpace& sp) {
    LineTables lt;
    {
        auto [x, w] = gauss01_rule(LineTables::q1d);
        for (int i = 0; i < LineTables::q1d; ++i) {
            lt.xg[i] = x[i];
            lt.wg[i] = w[i];
        }
    }
    const int nE = sp.n_dof;
    lt.ypts.resize(static_cast<size_t>(nE) * LineTables::q1d);
    for (int e = 0; e < nE; ++e) {
        const Vec3 A = sp.mesh.verts[sp.edge_vert[e][0]];
        const Vec3 B = sp.mesh.verts[sp.edge_vert[e][1]];
        for (int g = 0; g < LineTables::q1d; ++g)
            lt.ypts[static_cast<size_t>(e) * LineTables::q1d + g] = A + lt.xg[g] * (B - A);
    }
    // segment (ia, ib) of a triangle is the edge opposite the remaining vertex
    static constexpr int seg_slot[3] = {2, 0, 1}; // (0,1)->slot2, (1,2)->slot0, (2,0)->slot1
    std::vector<std::map<int, std::array<double, LineTables::q1d>>> acc(nE);
    for (int t = 0; t < sp.mesh.n_tris(); ++t) {
        for (int s = 0; s < 3; ++s) {
            const int ia = s, ib = (s + 1) % 3;
            const int e = sp.tri_edge[t][seg_slot[s]];
            Vec3 that = sp.mesh.verts[sp.mesh.tris[t][ib]] - sp.mesh.verts[sp.mesh.tris[t][ia]];
            that.normalize();
            for (int la = 0; la < 3; ++la) {
                const int k = sp.tri_edge[t][la];
                auto& lam = acc[e][k];
                for (int g = 0; g < LineTables::q1d; ++g)
                    lam[g] += sp.basis_at(t, la, lt.ypts[static_cast<size_t>(e) * LineTables::q1d + g]).dot(that);
            }
        }
    }
    lt.lam.resize(nE);
    for (int e = 0; e < nE; ++e)
        for (const auto& [k, lam] : acc[e]) lt.lam[e].push_back({k, lam});
    return lt;
}

MatC assemble_ldk(const CurrentSpace& sp, cd kappa, const LineTables& lt) {
    const int nT = sp.mesh.n_tris();
    const int nE = sp.n_dof;
    const int Q = LineTables::q1d;
    const size_t nY = lt.ypts.size();
    const bool statics_only = (kappa == cd(0.0, 0.0));

    // collapsed Duffy grids for the smooth remainder: fine near, coarse far
    struct Grid {
        std::vector<double> a1, a2, w;
    };
    auto duffy = [](int q) {
        Grid g;
        auto [x, w] = gauss01_rule(q);
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) {
                g.a1.push_back(x[i] * (1.0 - x[j]));
                g.a2.push_back(x[i] * x[j]);
                g.w.push_back(w[i] * w[j] * x[i]);
            }
        return g;
    };
    const Grid fine = duffy(4), coarse = duffy(2);

    MatC Ldk = MatC::Zero(nE, nE);
    std::vector<cd> Pot(nY);
    VecC contrib(nE);
    for (int t = 0; t < nT; ++t) {
        const std::array<Vec3, 3> V = {sp.mesh.verts[sp.mesh.tris[t][0]],
                                       sp.mesh.verts[sp.mesh.tris[t][1]],
                                       sp.mesh.verts[sp.mesh.tris[t][2]]};
        const Vec3 nh = sp.mesh.normal[t];
        const double area = sp.mesh.area[t];
        const Vec3 ctr = (V[0] + V[1] + V[2]) / 3.0;
        double diam = 0.0;
        for (int i = 0; i < 3; ++i) diam = std::max(diam, (V[i] - V[(i + 1) % 3]).norm());

        for (size_t p = 0; p < nY; ++p) {
            const Vec3& y = lt.ypts[p];
            cd pot = tri_pot_static(V, nh, y) / (4.0 * pi);
            if (!statics_only) {
                const Grid& g = ((y - ctr).norm() > 2.0 * diam) ? coarse : fine;
                cd sm(0.0, 0.0);
                for (size_t i = 0; i < g.w.size(); ++i) {
                    const Vec3 x =
                        (1.0 - g.a1[i] - g.a2[i]) * V[0] + g.a1[i] * V[1] + g.a2[i] * V[2];
                    const double r = (y - x).norm();
                    cd val = (r > 1e-12)
                                 ? (std::exp(cd(0.0, 1.0) * kappa * r) - 1.0) / (4.0 * pi * r)
                                 : cd(0.0, 1.0) * kappa / (4.0 * pi);
                    sm += g.w[i] * val;
                }
                pot += 2.0 * area * sm;
            }
            Pot[p] = pot;
        }

        contrib.setZero();
        for (int e = 0; e < nE; ++e) {
            const double len = sp.edge_len[e];
            for (const auto& entry : lt.lam[e]) {
                cd s(0.0, 0.0);
                for (int g = 0; g < Q; ++g)
                    s += entry.lam[g] * lt.wg[g] * Pot[static_cast<size_t>(e) * Q + g];
                contrib[entry.k] += len * s;
            }
        }
        for (int la = 0; la < 3; ++la)
            Ldk.row(sp.tri_edge[t][la]) += sp.basis_div(t, la) * contrib.transpose();
    }
    return Ldk;
}

} // namespace ssie::detail
