#include "ssie/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace ssie {

// ------------------------------------------------------------- Gauss-Legendre

namespace {

/// Gauss-Legendre nodes/weights on [0,1] by Newton iteration on Legendre
/// polynomials (plenty accurate for the orders used here).
void gauss01(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        // initial guess on [-1,1]
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            // Legendre P_n(t) and derivative by recurrence
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = (1.0 - t) / 2.0;           // map to [0,1], ascending
        w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
}

} // namespace

std::pair<std::vector<double>, std::vector<double>> gauss01_rule(int n) {
    std::vector<double> x, w;
    gauss01(n, x, w);
    return {std::move(x), std::move(w)};
}

QuadratureRule regular_rule(int order) {
    if (order < 1 || order > 20)
        throw std::runtime_error("regular_rule: order must be in 1..20");
    QuadratureRule r;
    if (order == 1) {
        r.bary = {{1.0 / 3, 1.0 / 3, 1.0 / 3}};
        r.w = {1.0};
        return r;
    }
    auto [x, w] = gauss01_rule(order);
    // collapsed map: (s,t) in [0,1]^2 -> barycentric (1-a1-a2, a1, a2),
    // a1 = s(1-t), a2 = s t, jacobian s; weights normalized to sum 1 (the
    // reference triangle has area 1/2, absorbed by the factor 2s).
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
            double a1 = x[i] * (1.0 - x[j]);
            double a2 = x[i] * x[j];
            r.bary.push_back({1.0 - a1 - a2, a1, a2});
            r.w.push_back(2.0 * w[i] * w[j] * x[i]);
        }
    return r;
}

// ------------------------------------------------------------ pair transforms

namespace {

struct Emitter {
    PairRule* r;
    void operator()(double ax, double ay, double bx, double by, double lw) {
        r->u1.push_back(ax - ay);
        r->v1.push_back(ay);
        r->u2.push_back(bx - by);
        r->v2.push_back(by);
        r->w.push_back(lw);
    }
};

PairRule make_pair_rule(int shared, int q) {
    std::vector<double> x, w;
    gauss01(q, x, w);
    PairRule rule;
    Emitter emit{&rule};
    for (int i0 = 0; i0 < q; ++i0)
        for (int i1 = 0; i1 < q; ++i1)
            for (int i2 = 0; i2 < q; ++i2)
                for (int i3 = 0; i3 < q; ++i3) {
                    const double xi = x[i0], e1 = x[i1], e2 = x[i2], e3 = x[i3];
                    const double ww = w[i0] * w[i1] * w[i2] * w[i3];
                    switch (shared) {
                    case 3: { // identical panels: 6 subdomains, 3 swap-symmetric pairs
                        const double lw = ww * xi * xi * xi * e1 * e1 * e2;
                        emit(xi, xi * (1 - e1 + e1 * e2), xi * (1 - e1 * e2 * e3), xi * (1 - e1), lw);
                        emit(xi * (1 - e1 * e2 * e3), xi * (1 - e1), xi, xi * (1 - e1 + e1 * e2), lw);
                        emit(xi, xi * e1 * (1 - e2 + e2 * e3), xi * (1 - e1 * e2), xi * e1 * (1 - e2), lw);
                        emit(xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * (1 - e2 + e2 * e3), lw);
                        emit(xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * (1 - e2), lw);
                        emit(xi, xi * e1 * (1 - e2), xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), lw);
                        break;
                    }
                    case 2: { // common edge: 5 subdomains
                        const double lw = ww * xi * xi * xi * e1 * e1 * e2;
                        emit(xi, xi * e1 * e3, xi * (1 - e1 * e2), xi * e1 * (1 - e2), ww * xi * xi * xi * e1 * e1);
                        emit(xi, xi * e1, xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), lw);
                        emit(xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * e2 * e3, lw);
                        emit(xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), xi, xi * e1, lw);
                        emit(xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * e2, lw);
                        break;
                    }
                    case 1: { // common vertex: 2 swap-symmetric subdomains
                        const double lw = ww * xi * xi * xi * e2;
                        emit(xi, xi * e1, xi * e2, xi * e2 * e3, lw);
                        emit(xi * e2, xi * e2 * e3, xi, xi * e1, lw);
                        break;
                    }
                    default: { // separated: symmetric product of two collapsed rules
                        emit(xi, xi * e1, e2, e2 * e3, ww * xi * e2);
                        break;
                    }
                    }
                }
    return rule;
}

std::map<std::pair<int, int>, PairRule> g_pair_cache;

} // namespace

const PairRule& pair_rule(int shared, int order) {
    if (shared < 0 || shared > 3) throw std::runtime_error("pair_rule: shared must be 0..3");
    if (order < 1 || order > 20) throw std::runtime_error("pair_rule: order must be in 1..20");
    auto key = std::make_pair(shared, order);
    auto it = g_pair_cache.find(key);
    if (it == g_pair_cache.end())
        it = g_pair_cache.emplace(key, make_pair_rule(shared, order)).first;
    return it->second;
}

void prewarm_pair_rules(int regular_order, int singular_order) {
    pair_rule(0, regular_order);
    for (int c = 0; c < 4; ++c) pair_rule(c, singular_order);
}

// -------------------------------------------------------------- pair integral

int count_shared_vertices(const std::array<Vec3, 3>& T1, const std::array<Vec3, 3>& T2) {
    int n = 0;
    for (const auto& a : T1)
        for (const auto& b : T2)
            if (a == b) {
                ++n;
                break;
            }
    return n;
}

cd integrate_pair(const std::array<Vec3, 3>& T1, const std::array<Vec3, 3>& T2,
                  const std::function<cd(const Vec3&, const Vec3&)>& kernel,
                  const PairScheme& scheme) {
    // shared-vertex-first permutations (required by the touching-pair maps)
    std::array<int, 3> p1{}, p2{};
    int ns = 0;
    std::array<bool, 3> used2{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!used2[j] && T1[i] == T2[j]) {
                p1[ns] = i;
                p2[ns] = j;
                used2[j] = true;
                ++ns;
                break;
            }
    int k1 = ns, k2 = ns;
    for (int i = 0; i < 3; ++i) {
        bool in1 = false, in2 = false;
        for (int s = 0; s < ns; ++s) {
            in1 |= (p1[s] == i);
            in2 |= (p2[s] == i);
        }
        if (!in1) p1[k1++] = i;
        if (!in2) p2[k2++] = i;
    }

    int order = scheme.singular_order;
    if (ns == 0) {
        const Vec3 c1 = (T1[0] + T1[1] + T1[2]) / 3.0;
        const Vec3 c2 = (T2[0] + T2[1] + T2[2]) / 3.0;
        double diam = 0.0;
        for (int e = 0; e < 3; ++e)
            diam += ((T1[e] - T1[(e + 1) % 3]).norm() + (T2[e] - T2[(e + 1) % 3]).norm()) / 6.0;
        order = ((c1 - c2).norm() < scheme.near_factor * diam) ? scheme.near_order
                                                               : scheme.regular_order;
    }
    const PairRule& rule = pair_rule(ns, order);

    const Vec3 A0 = T1[p1[0]], A1 = T1[p1[1]], A2 = T1[p1[2]];
    const Vec3 B0 = T2[p2[0]], B1 = T2[p2[1]], B2 = T2[p2[2]];
    const double a1 = 0.5 * (A1 - A0).cross(A2 - A0).norm();
    const double a2 = 0.5 * (B1 - B0).cross(B2 - B0).norm();

    cd acc = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
        const Vec3 x = (1.0 - rule.u1[i] - rule.v1[i]) * A0 + rule.u1[i] * A1 + rule.v1[i] * A2;
        const Vec3 y = (1.0 - rule.u2[i] - rule.v2[i]) * B0 + rule.u2[i] * B1 + rule.v2[i] * B2;
        acc += rule.w[i] * kernel(x, y);
    }
    return acc * (4.0 * a1 * a2);
}

} // namespace ssie
