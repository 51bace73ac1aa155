// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Each check pins its tolerance in code; the printed details carry the
// measured values so a failure documents what the geometry actually does.

#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "core/constructions.hpp"
#include "core/flexpath.hpp"
#include "core/mesh.hpp"
#include "core/rigidity.hpp"
#include "helpers.hpp"

using namespace polyflex;
using namespace testhelpers;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const char* title) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, title);
    if (!pass) ++g_failures;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

// 1. invariance of M and V along traced flexes of the line-symmetric octahedra
bool criterion_1() {
    bool ok = true;
    for (int seed = 0; seed < 5; ++seed) {
        const Mesh br = bricard_type1(bricard_seed_preset(seed));
        TraceConfig config;
        config.steps = 200;
        config.step_size = 0.01;
        const TraceResult res = trace_flex(br, config);
        const double m0 = res.report.initial.total_mean_curvature;
        const double v0 = res.report.initial.oriented_volume;
        double dm = 0, dv = 0, drift = 0;
        for (const auto& row : res.report.rows) {
            dm = std::max(dm, std::abs(row.total_mean_curvature - m0));
            dv = std::max(dv, std::abs(row.oriented_volume - v0));
            drift = std::max(drift, row.max_edge_drift);
        }
        const bool seed_ok =
            dm <= 1e-8 * (1 + std::abs(m0)) && dv <= 1e-8 * (1 + std::abs(v0)) && drift <= 1e-10;
        std::printf("    seed %d: max|dM| = %.3e, max|dV| = %.3e, max drift = %.3e, t_end = %.3f\n",
                    seed, dm, dv, drift, res.report.rows.back().t);
        ok = ok && seed_ok;
    }
    return ok;
}

// 2. stationarity of M along infinitesimal flexes, with second-order decay
bool criterion_2() {
    bool ok = true;
    const T1 t1 = build_t1(regular_tetra_points(), {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const Mesh br = bricard_type1(bricard_seed_preset(0));
    struct Case {
        const char* name;
        const Mesh& mesh;
    } cases[] = {{"T1", t1.mesh}, {"octahedron", br}};
    for (const auto& c : cases) {
        const VertexField w = flex_space(c.mesh).basis[0];
        const double d1 = tmc_directional_derivative(c.mesh, w, 1e-5);
        const double d2 = tmc_directional_derivative(c.mesh, w, 5e-6);
        const bool small = std::abs(d1) <= 1e-6;
        // quartering within a factor of 2; below 5e-10 both values sit at the
        // floating-point floor of the central difference and the ratio is
        // unresolvable (for the half-turn-symmetric octahedron the derivative
        // vanishes identically, so only roundoff remains)
        bool quarters;
        if (std::abs(d1) <= 5e-10 && std::abs(d2) <= 5e-10) {
            quarters = true;
            std::printf("    %s: |dM/dt| = %.3e at h=1e-5, %.3e at h=5e-6 "
                        "(below resolution; decay unmeasurable)\n",
                        c.name, std::abs(d1), std::abs(d2));
        } else {
            const double ratio = std::abs(d1) / std::max(std::abs(d2), 1e-300);
            quarters = ratio >= 2.0 && ratio <= 8.0;
            std::printf("    %s: |dM/dt| = %.3e at h=1e-5, decay ratio %.2f (want 4, factor 2)\n",
                        c.name, std::abs(d1), ratio);
        }
        ok = ok && small && quarters;
    }
    return ok;
}

// 3. the glued polyhedron: nonzero flux carried through both gluings, with
//    the coplanarity predicates false at every vertex
bool criterion_3() {
    const CounterexampleParams params;
    const CounterexampleResult res = build_counterexample(params);
    const int dim = flex_space(res.mesh).dimension();
    const bool dim_ok = dim >= 1;

    bool predicates_ok = true;
    for (int v = 0; v < 8; ++v)
        predicates_ok = predicates_ok && !res.star_coplanar[v] && !res.edges_coplanar[v];
    static const char* names[8] = {"A", "B", "C", "D", "V", "B1", "A1", "V1"};
    std::string failing;
    for (int v = 0; v < 8; ++v)
        if (res.star_coplanar[v] || res.edges_coplanar[v])
            failing += std::string(" ") + names[v];

    const double target = res.area_abc * params.flex_magnitude / 3.0;
    const bool flux_ok = rel(res.flux_p, target) <= 1e-9 &&
                         rel(res.flux_p, res.flux_t2) <= 1e-9 &&
                         rel(res.flux_p, res.flux_t1) <= 1e-9;

    std::printf("    flex dimension %d; flux %.12g vs area/3 target %.12g "
                "(T1 %.12g, T2 %.12g)\n",
                dim, res.flux_p, target, res.flux_t1, res.flux_t2);
    if (!predicates_ok)
        std::printf("    predicates still true at:%s (three base-plane edges survive "
                    "gluing at B and C for every axis choice)\n",
                    failing.c_str());
    return dim_ok && predicates_ok && flux_ok;
}

// 4. the flux functional equals the volume derivative
bool criterion_4() {
    std::mt19937_64 rng(8080);
    std::normal_distribution<double> g(0.0, 1.0);
    double worst = 0.0;
    for (int mesh_i = 0; mesh_i < 10; ++mesh_i) {
        const Mesh m = mesh_i % 2 ? octahedron_mesh(0.15, 600 + mesh_i)
                                  : tetra_mesh(random_tetra_points(rng));
        for (int trial = 0; trial < 100; ++trial) {
            VertexField w(m.vertex_count());
            for (auto& x : w) x = Vec3(g(rng), g(rng), g(rng));
            worst = std::max(worst, rel(flux(m, w), volume_derivative(m, w)));
        }
    }
    const bool identity_ok = worst <= 1e-12;

    const Mesh m = octahedron_mesh(0.1, 1234);
    double trivial_worst = 0.0;
    for (const auto& tm : trivial_motion_basis(m))
        trivial_worst = std::max({trivial_worst, std::abs(flux(m, tm)),
                                  std::abs(volume_derivative(m, tm))});
    const bool trivial_ok = trivial_worst <= 1e-10;

    // finite-difference oracle for the proportionality constant between the
    // volume derivative and the flux (the four-point rule is exact here)
    VertexField w(m.vertex_count());
    for (auto& x : w) x = Vec3(g(rng), g(rng), g(rng));
    const double h = 1e-3 * m.diameter();
    const auto vol_at = [&](double t) {
        std::vector<Vec3> pos = m.vertices();
        for (size_t i = 0; i < pos.size(); ++i) pos[i] += t * w[i];
        return m.displaced_positions(std::move(pos)).oriented_volume();
    };
    const double fd = (-vol_at(2 * h) + 8 * vol_at(h) - 8 * vol_at(-h) + vol_at(-2 * h)) / (12 * h);
    const double constant = fd / flux(m, w);
    const bool constant_ok = std::abs(constant - 1.0) <= 1e-6;

    std::printf("    worst relative gap %.3e over 10 meshes x 100 fields; trivial-motion "
                "worst %.3e\n    dV/dt = %.9f x flux (finite-difference oracle; the "
                "derivative IS the flux, no 1/3)\n",
                worst, trivial_worst, constant);
    return identity_ok && trivial_ok && constant_ok;
}

// 5. the closed form of M on the one-parameter family, plus the behavior of
//    dM/dl at the collapse point l -> 1/sqrt(3)
bool criterion_5() {
    bool match_ok = true;
    for (double l : {0.7, 1.0, 1.5, 2.0, 5.0}) {
        DeltaKParams params;
        params.l = l;
        const double m_mesh = delta_k_mesh(params).total_mean_curvature();
        const double m_closed = delta_k_closed_form(l).total_mean_curvature;
        const bool row_ok = std::abs(m_mesh - m_closed) <= 1e-10 * std::abs(m_closed);
        std::printf("    l = %.2f: M_mesh = %.15g, M_closed = %.15g%s\n", l, m_mesh, m_closed,
                    row_ok ? "" : "  << mismatch");
        match_ok = match_ok && row_ok;
    }
    const double m1 = delta_k_closed_form(1.0).total_mean_curvature;
    const double tetra_value = 3.0 * (M_PI - std::acos(1.0 / 3.0));
    const bool l1_ok = std::abs(m1 - tetra_value) <= 1e-12;

    // probe: finite-difference dM/dl at l0 + eps must double as eps is quartered
    const double l0 = 1.0 / std::sqrt(3.0);
    const auto fd = [&](double eps) {
        const double d = eps / 8.0;
        return (delta_k_closed_form(l0 + eps + d).total_mean_curvature -
                delta_k_closed_form(l0 + eps - d).total_mean_curvature) /
               (2.0 * d);
    };
    const double f1 = fd(1e-2), f2 = fd(2.5e-3), f3 = fd(6.25e-4);
    const bool probe_ok = (f2 / f1 >= 1.5 && f2 / f1 <= 3.0) && (f3 / f2 >= 1.5 && f3 / f2 <= 3.0);
    std::printf("    probe dM/dl at l0+eps: %.6f, %.6f, %.6f (ratios %.3f, %.3f; doubling "
                "required)\n",
                f1, f2, f3, f2 / f1, f3 / f2);
    if (!probe_ok) {
        // the divergence sits one derivative higher: report it for the record
        const auto fd2 = [&](double eps) {
            const double d = eps / 8.0;
            return (delta_k_closed_form(l0 + eps + d).total_mean_curvature -
                    2 * delta_k_closed_form(l0 + eps).total_mean_curvature +
                    delta_k_closed_form(l0 + eps - d).total_mean_curvature) /
                   (d * d);
        };
        std::printf("    (d2M/dl2 at the same offsets: %.3f, %.3f, %.3f -- this is the "
                    "quantity that doubles)\n",
                    fd2(1e-2), fd2(2.5e-3), fd2(6.25e-4));
    }
    return match_ok && l1_ok && probe_ok;
}

// 6. refinement invariance of M on the family
bool criterion_6() {
    const double l = 1.3;
    DeltaKParams base;
    base.l = l;
    const double m0 = delta_k_mesh(base).total_mean_curvature();
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        DeltaKParams params;
        params.l = l;
        for (unsigned i = 0; i < 1 + rng() % 2; ++i)
            params.bd_points.push_back(0.1 + 0.8 * (0.2 + 0.13 * trial + 0.31 * i));
        for (auto& t : params.bd_points) t = t - std::floor(t / 0.999) * 0.999 + 0.0005;
        std::sort(params.bd_points.begin(), params.bd_points.end());
        params.bd_points.erase(
            std::unique(params.bd_points.begin(), params.bd_points.end(),
                        [](double a, double b) { return b - a < 1e-3; }),
            params.bd_points.end());
        for (unsigned i = 0; i < rng() % 3; ++i) {
            double a = u(rng), b = u(rng) * (1 - a);
            params.abd_points.push_back({a, std::max(b, 0.02), 1 - a - std::max(b, 0.02)});
        }
        for (unsigned i = 0; i < rng() % 3; ++i) {
            double a = u(rng), b = u(rng) * (1 - a);
            params.bcd_points.push_back({a, std::max(b, 0.02), 1 - a - std::max(b, 0.02)});
        }
        const Mesh m = delta_k_mesh(params);
        worst = std::max(worst, std::abs(m.total_mean_curvature() - m0) / std::abs(m0));
    }
    std::printf("    worst relative change of M over 10 refinements: %.3e\n", worst);
    return worst <= 1e-12;
}

// 7. rank decisions: rigid inputs have no flex, the subdivided tetrahedron
//    has exactly the vertical flex at its interior vertex
bool criterion_7() {
    bool ok = flex_space(tetra_mesh(regular_tetra_points())).dimension() == 0;
    for (unsigned seed = 0; seed < 20 && ok; ++seed)
        ok = flex_space(octahedron_mesh(0.1, seed)).dimension() == 0;

    const T1 t1 = build_t1(regular_tetra_points(), {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const FlexBasis fb = flex_space(t1.mesh);
    const bool dim_ok = fb.dimension() == 1;

    // support on V modulo rigid motions: compare with the pure vertical field
    // orthogonalized against the trivial basis
    Eigen::VectorXd pure = field_to_flat(t1.field);
    Eigen::MatrixXd T(pure.size(), 6);
    const auto trivial = trivial_motion_basis(t1.mesh);
    for (int k = 0; k < 6; ++k) T.col(k) = field_to_flat(trivial[k]);
    pure -= T * (T.transpose() * pure);
    pure.normalize();
    double support_gap = 2.0;
    if (dim_ok) {
        const Eigen::VectorXd basis = field_to_flat(fb.basis[0]);
        support_gap = std::min((basis - pure).norm(), (basis + pure).norm());
    }
    std::printf("    rigid meshes: %s; T1 flex dimension %d, distance to the pure "
                "interior-vertex mode %.3e\n",
                ok ? "all dimension 0" : "unexpected flex", fb.dimension(), support_gap);
    return ok && dim_ok && support_gap <= 1e-9;
}

// 8. tetrahedron volume from edge lengths against the signed volume
bool criterion_8() {
    std::mt19937_64 rng(2718);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_tetra_points(rng);
        const Mesh t = tetra_mesh(p);
        const std::array<double, 6> lengths = {
            (p[0] - p[1]).norm(), (p[0] - p[2]).norm(), (p[0] - p[3]).norm(),
            (p[1] - p[2]).norm(), (p[1] - p[3]).norm(), (p[2] - p[3]).norm()};
        const double vcm = cayley_menger_volume(lengths);
        const double vd = std::abs(t.oriented_volume());
        worst = std::max(worst, std::abs(vcm - vd) / vd);
    }
    const double r2 = std::sqrt(2.0);
    const double flat = cayley_menger_volume({1, r2, 1, 1, r2, 1});
    std::printf("    worst relative gap over 100 tetrahedra: %.3e; flat square volume %.3e\n",
                worst, flat);
    return worst <= 1e-10 && flat <= 1e-12;
}

}  // namespace

int main() {
    std::printf("polyflex acceptance suite\n");
    report(1, criterion_1(), "M and V constant along traced flexes (5 octahedron seeds)");
    report(2, criterion_2(), "dM/dt vanishes along infinitesimal flexes, decaying at 2nd order");
    report(3, criterion_3(), "glued counterexample: flex with nonzero flux, no coplanar vertex");
    report(4, criterion_4(), "flux equals the volume derivative; rigid motions annihilated");
    report(5, criterion_5(), "closed-form M matches the mesh; derivative probe at the collapse");
    report(6, criterion_6(), "M unchanged under admissible refinements of the family");
    report(7, criterion_7(), "rigidity ranks: rigid inputs, one-dimensional flex of T1");
    report(8, criterion_8(), "edge-length volume agrees with the signed volume");
    if (g_failures)
        std::printf("%d criterion(s) failed\n", g_failures);
    else
        std::printf("all criteria passed\n");
    return g_failures;
}
