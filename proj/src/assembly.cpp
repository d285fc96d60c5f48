// Fused Galerkin assembly of all surface-surface kernel matrices.
//
// Pair loop layout: triangle pairs are processed in windows of test triangles;
// within a window each test triangle's three matrix rows are accumulated into
// a private stripe (filled by exactly one task, scanning source triangles in
// ascending order), and stripes are merged serially in fixed order.  Output is
// therefore bit-identical for any thread count.
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "detail.hpp"
#include "ssie/config.hpp"
#include "ssie/operators.hpp"

namespace ssie {

namespace {

struct TriData {
    std::array<Vec3, 3> v;        // vertices in slot order
    std::array<int, 3> gv;        // global vertex ids
    Vec3 n;
    double area;
    std::array<int, 3> ge;        // global edge per slot
    std::array<double, 3> coef;   // sign * L / (2 area)
    std::array<double, 3> dv;     // sign * L / area
};

std::vector<TriData> tri_data(const CurrentSpace& sp) {
    std::vector<TriData> td(sp.mesh.n_tris());
    for (int t = 0; t < sp.mesh.n_tris(); ++t) {
        TriData& d = td[t];
        for (int e = 0; e < 3; ++e) {
            d.gv[e] = sp.mesh.tris[t][e];
            d.v[e] = sp.mesh.verts[d.gv[e]];
            d.ge[e] = sp.tri_edge[t][e];
            double L = sp.edge_len[d.ge[e]];
            d.coef[e] = sp.tri_sign[t][e] * L / (2.0 * sp.mesh.area[t]);
            d.dv[e] = sp.tri_sign[t][e] * L / sp.mesh.area[t];
        }
        d.n = sp.mesh.normal[t];
        d.area = sp.mesh.area[t];
    }
    return td;
}

int shared_vertex_count(const TriData& a, const TriData& b) {
    int n = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (a.gv[i] == b.gv[j]) {
                ++n;
                break;
            }
    return n;
}

/// physical quadrature grid of one triangle for a given collapsed rule
struct TriGrid {
    std::vector<Vec3> x;
    std::vector<double> w;   // physical weights (sum = area)
};

TriGrid make_grid(const TriData& t, const QuadratureRule& r) {
    TriGrid g;
    g.x.resize(r.size());
    g.w.resize(r.size());
    for (int i = 0; i < r.size(); ++i) {
        const auto& b = r.bary[i];
        g.x[i] = b[0] * t.v[0] + b[1] * t.v[1] + b[2] * t.v[2];
        g.w[i] = r.w[i] * t.area;
    }
    return g;
}

/// 3-row accumulation stripe for one test triangle
struct Stripe {
    std::vector<cd> sv, sd, svr, xk, xkr; // each 3 * nE, slot-major
    void reset(int nE) {
        for (auto* m : {&sv, &sd, &svr, &xk, &xkr}) {
            m->assign(static_cast<size_t>(3) * nE, cd(0.0, 0.0));
        }
    }
};

struct PairContrib {
    // 3x3 slot-pair accumulators
    std::array<std::array<cd, 3>, 3> sv{}, sd{}, svr{}, xk{}, xkr{};
    void clear() {
        for (auto* m : {&sv, &sd, &svr, &xk, &xkr})
            for (auto& row : *m) row.fill(cd(0, 0));
    }
};

/// kernel evaluation + slot accumulation at one point pair
inline void accumulate_point(const TriData& A, const TriData& B, const Vec3& x, const Vec3& y,
                             double w, double k_re, double k_im, bool want_cross,
                             PairContrib& c) {
    const Vec3 d = x - y;
    const double r = d.norm();
    const double inv4pir = 1.0 / (4.0 * pi * r);
    double mag = inv4pir;
    if (k_im != 0.0) mag *= std::exp(-k_im * r);
    const cd G = w * std::polar(mag, k_re * r);
    // grad_x G = G * (i kappa r - 1) / r^2 * d
    const cd GCf = G * (cd(0.0, 1.0) * cd(k_re, k_im) * r - 1.0) / (r * r);

    std::array<Vec3, 3> fl, fk, nbfk;
    for (int s = 0; s < 3; ++s) {
        fl[s] = A.coef[s] * (x - A.v[s]);
        fk[s] = B.coef[s] * (y - B.v[s]);
        nbfk[s] = B.n.cross(fk[s]);
    }
    for (int lb = 0; lb < 3; ++lb) {
        const Vec3 dxfk = d.cross(fk[lb]);
        const Vec3 dxnbfk = d.cross(nbfk[lb]);
        for (int la = 0; la < 3; ++la) {
            c.sv[la][lb] += G * fl[la].dot(fk[lb]);
            c.svr[la][lb] += G * fl[la].dot(nbfk[lb]);
            if (want_cross) {
                c.xk[la][lb] += GCf * fl[la].dot(dxfk);
                c.xkr[la][lb] += GCf * fl[la].dot(dxnbfk);
            }
        }
    }
    // divergence-divergence term: constant slot factors applied by caller
    c.sd[0][0] += G;
}

void flush_pair(const TriData& A, const TriData& B, const PairContrib& c, int nE, Stripe& st) {
    const cd sumG = c.sd[0][0];
    for (int la = 0; la < 3; ++la) {
        const size_t row = static_cast<size_t>(la) * nE;
        for (int lb = 0; lb < 3; ++lb) {
            const int col = B.ge[lb];
            st.sv[row + col] += c.sv[la][lb];
            st.sd[row + col] += A.dv[la] * B.dv[lb] * sumG;
            st.svr[row + col] += c.svr[la][lb];
            st.xk[row + col] += c.xk[la][lb];
            st.xkr[row + col] += c.xkr[la][lb];
        }
    }
}

} // namespace

// ----------------------------------------------------------------- main entry

void detail::assemble_kernels_into(const CurrentSpace& sp, cd kappa, const AssemblyOptions& opt,
                                   bool want_cross, bool /*want_ldk*/, KernelSet& out) {
    const int nT = sp.mesh.n_tris();
    const int nE = sp.n_dof;
    const double k_re = kappa.real(), k_im = kappa.imag();

    const std::vector<TriData> td = tri_data(sp);

    const QuadratureRule reg = regular_rule(opt.scheme.regular_order);
    const QuadratureRule nearr = regular_rule(opt.scheme.near_order);
    std::vector<TriGrid> grid_reg(nT), grid_near(nT);
    for (int t = 0; t < nT; ++t) {
        grid_reg[t] = make_grid(td[t], reg);
        grid_near[t] = make_grid(td[t], nearr);
    }
    for (int c = 1; c <= 3; ++c) pair_rule(c, opt.scheme.singular_order);

    double mean_diam = 0.0;
    for (int t = 0; t < nT; ++t) {
        double dmax = 0.0;
        for (int e = 0; e < 3; ++e) dmax = std::max(dmax, (td[t].v[e] - td[t].v[(e + 1) % 3]).norm());
        mean_diam += dmax;
    }
    mean_diam /= nT;
    const double near_dist = opt.scheme.near_factor * mean_diam;
    std::vector<Vec3> ctr(nT);
    for (int t = 0; t < nT; ++t) ctr[t] = (td[t].v[0] + td[t].v[1] + td[t].v[2]) / 3.0;

    out.kappa = kappa;
    for (auto* m : {&out.Sv, &out.Sd, &out.Cross, &out.SvR, &out.CrossR})
        m->setZero(nE, nE);
    out.Ldk.resize(0, 0);

    const int nthreads = resolve_threads(opt.threads);
    const int W = 32; // window of test triangles merged per round
    std::vector<Stripe> stripes(W);

    for (int w0 = 0; w0 < nT; w0 += W) {
        const int wn = std::min(W, nT - w0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
        for (int s = 0; s < wn; ++s) {
            const int ta = w0 + s;
            Stripe& st = stripes[s];
            st.reset(nE);
            PairContrib c;
            const TriData& A = td[ta];
            for (int tb = 0; tb < nT; ++tb) {
                const TriData& B = td[tb];
                const int ns = shared_vertex_count(A, B);
                c.clear();
                const bool cross_here = want_cross && ns < 3; // identical-panel cross kernels vanish
                if (ns == 0) {
                    const bool is_near = (ctr[ta] - ctr[tb]).norm() < near_dist;
                    const TriGrid& ga = is_near ? grid_near[ta] : grid_reg[ta];
                    const TriGrid& gb = is_near ? grid_near[tb] : grid_reg[tb];
                    for (size_t i = 0; i < ga.x.size(); ++i)
                        for (size_t j = 0; j < gb.x.size(); ++j)
                            accumulate_point(A, B, ga.x[i], gb.x[j], ga.w[i] * gb.w[j],
                                             k_re, k_im, cross_here, c);
                } else {
                    // shared-vertex-first permutations for the transform rule
                    std::array<int, 3> p1{}, p2{};
                    int k = 0;
                    std::array<bool, 3> used{};
                    for (int i = 0; i < 3 && k < ns; ++i)
                        for (int j = 0; j < 3; ++j)
                            if (!used[j] && A.gv[i] == B.gv[j]) {
                                p1[k] = i;
                                p2[k] = j;
                                used[j] = true;
                                ++k;
                                break;
                            }
                    int k1 = ns, k2 = ns;
                    for (int i = 0; i < 3; ++i) {
                        bool in1 = false, in2 = false;
                        for (int s2 = 0; s2 < ns; ++s2) {
                            in1 |= (p1[s2] == i);
                            in2 |= (p2[s2] == i);
                        }
                        if (!in1) p1[k1++] = i;
                        if (!in2) p2[k2++] = i;
                    }
                    const PairRule& rule = pair_rule(ns, opt.scheme.singular_order);
                    const Vec3 &A0 = A.v[p1[0]], &A1 = A.v[p1[1]], &A2 = A.v[p1[2]];
                    const Vec3 &B0 = B.v[p2[0]], &B1 = B.v[p2[1]], &B2 = B.v[p2[2]];
                    const double jac = 4.0 * A.area * B.area;
                    for (int i = 0; i < rule.size(); ++i) {
                        const Vec3 x = (1.0 - rule.u1[i] - rule.v1[i]) * A0 + rule.u1[i] * A1 + rule.v1[i] * A2;
                        const Vec3 y = (1.0 - rule.u2[i] - rule.v2[i]) * B0 + rule.u2[i] * B1 + rule.v2[i] * B2;
                        accumulate_point(A, B, x, y, jac * rule.w[i], k_re, k_im, cross_here, c);
                    }
                }
                flush_pair(A, B, c, nE, st);
            }
        }
        // deterministic serial merge
        for (int s = 0; s < wn; ++s) {
            const int ta = w0 + s;
            for (int la = 0; la < 3; ++la) {
                const int row = td[ta].ge[la];
                const size_t off = static_cast<size_t>(la) * nE;
                for (int col = 0; col < nE; ++col) {
                    out.Sv(row, col) += stripes[s].sv[off + col];
                    out.Sd(row, col) += stripes[s].sd[off + col];
                    out.SvR(row, col) += stripes[s].svr[off + col];
                    out.Cross(row, col) += stripes[s].xk[off + col];
                    out.CrossR(row, col) += stripes[s].xkr[off + col];
                }
            }
        }
    }
    if (opt.flip_m_sign) {
        out.Cross = -out.Cross;
        out.CrossR = -out.CrossR;
    }
}

// -------------------------------------------------- single-triangle matrices

namespace {

MatX local_galerkin(const CurrentSpace& sp, bool pairing) {
    const int nE = sp.n_dof;
    MatX G = MatX::Zero(nE, nE);
    const QuadratureRule r = regular_rule(4);
    for (int t = 0; t < sp.mesh.n_tris(); ++t) {
        const Vec3 n = sp.mesh.normal[t];
        for (int i = 0; i < r.size(); ++i) {
            const auto& b = r.bary[i];
            const Vec3 x = b[0] * sp.mesh.verts[sp.mesh.tris[t][0]] +
                           b[1] * sp.mesh.verts[sp.mesh.tris[t][1]] +
                           b[2] * sp.mesh.verts[sp.mesh.tris[t][2]];
            const double w = r.w[i] * sp.mesh.area[t];
            for (int la = 0; la < 3; ++la) {
                const Vec3 fl = sp.basis_at(t, la, x);
                const int gl = sp.tri_edge[t][la];
                for (int lb = 0; lb < 3; ++lb) {
                    const Vec3 fk = sp.basis_at(t, lb, x);
                    const int gk = sp.tri_edge[t][lb];
                    G(gl, gk) += w * (pairing ? fl.dot(fk.cross(n)) : fl.dot(fk));
                }
            }
        }
    }
    return G;
}

} // namespace

MatX assemble_mass(const CurrentSpace& sp) { return local_galerkin(sp, false); }
MatX assemble_pairing(const CurrentSpace& sp) { return local_galerkin(sp, true); }

VecC moments(const CurrentSpace& sp,
             const std::function<Eigen::Vector3cd(const Vec3&, const Vec3&)>& field) {
    VecC mom = VecC::Zero(sp.n_dof);
    const QuadratureRule r = regular_rule(6);
    for (int t = 0; t < sp.mesh.n_tris(); ++t) {
        const Vec3 n = sp.mesh.normal[t];
        for (int i = 0; i < r.size(); ++i) {
            const auto& b = r.bary[i];
            const Vec3 x = b[0] * sp.mesh.verts[sp.mesh.tris[t][0]] +
                           b[1] * sp.mesh.verts[sp.mesh.tris[t][1]] +
                           b[2] * sp.mesh.verts[sp.mesh.tris[t][2]];
            const double w = r.w[i] * sp.mesh.area[t];
            const Eigen::Vector3cd u = field(x, n);
            for (int la = 0; la < 3; ++la) {
                const Vec3 fl = sp.basis_at(t, la, x);
                mom[sp.tri_edge[t][la]] += w * (u(0) * fl(0) + u(1) * fl(1) + u(2) * fl(2));
            }
        }
    }
    return mom;
}

MatX scalar_V0_piecewise_constant(const SurfaceMesh& mesh, const AssemblyOptions& opt) {
    const int nT = mesh.n_tris();
    MatX A = MatX::Zero(nT, nT);
    auto k0 = [](const Vec3& x, const Vec3& y) { return cd(1.0 / (4.0 * pi * (x - y).norm()), 0.0); };
    for (int i = 0; i < nT; ++i) {
        std::array<Vec3, 3> Ti = {mesh.verts[mesh.tris[i][0]], mesh.verts[mesh.tris[i][1]],
                                  mesh.verts[mesh.tris[i][2]]};
        for (int j = 0; j < nT; ++j) {
            std::array<Vec3, 3> Tj = {mesh.verts[mesh.tris[j][0]], mesh.verts[mesh.tris[j][1]],
                                      mesh.verts[mesh.tris[j][2]]};
            A(i, j) = integrate_pair(Ti, Tj, k0, opt.scheme).real();
        }
    }
    return A;
}

} // namespace ssie
