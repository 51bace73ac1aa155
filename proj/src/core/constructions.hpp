#pragma once

#include <array>
#include <optional>
#include <vector>

#include "core/mesh.hpp"
#include "core/rigidity.hpp"

namespace polyflex {

/// Tetrahedron ABCD with face ABC subdivided at the interior barycentric
/// point V. The returned field is zero on A..D and `s` times the outward
/// unit normal of the subdivided face at V; it spans the nontrivial
/// infinitesimal-flex space of the result.
struct T1 {
    Mesh mesh;          // vertices A,B,C,D,V = 0..4
    VertexField field;
};
T1 build_t1(const std::array<Vec3, 4>& tetra, const std::array<double, 3>& barycentric,
            double s = 1.0);

/// T1 with face ACV replaced by the lateral surface of the pyramid over ACV
/// with apex B1 (vertex 5). The field is the unique extension of T1's field.
/// Throws CoplanarApex when B1 lies in the plane ABC.
struct T2 {
    Mesh mesh;          // vertices A,B,C,D,V,B1 = 0..5
    VertexField field;
};
T2 build_t2(const std::array<Vec3, 4>& tetra, const std::array<double, 3>& barycentric,
            double s, const Vec3& apex);

/// Seed points of a line-symmetric octahedron; the symmetry is the half-turn
/// sigma(x,y,z) = (-x,-y,z) about the z-axis.
struct BricardSeed {
    Vec3 a, b, v;
};

/// The flexible octahedron on {A, B, V, sigma A, sigma B, sigma V}. The
/// length identities |AB| = |A1B1| and |B1A| = |BA1| hold bitwise because
/// sigma negates coordinates exactly.
Mesh bricard_type1(const BricardSeed& seed);

/// Deterministic seed table (index 0 is the default); any k >= 0 accepted.
BricardSeed bricard_seed_preset(int k);

struct CounterexampleParams {
    std::array<Vec3, 4> tetra = {Vec3(0.0, 0.0, 0.0), Vec3(1.05, 0.0, 0.0),
                                 Vec3(0.45, 1.12, 0.0), Vec3(0.55, 0.38, 1.27)};
    std::array<double, 3> v_barycentric = {0.34, 0.33, 0.33};
    Vec3 apex = Vec3(0.52, 0.20, -0.93);
    double flex_magnitude = 1.0;
    /// Candidate half-turn axis angles in the plane orthogonal to B--B1.
    /// Empty list exhausts immediately.
    std::vector<double> axis_angles = default_axis_angles();
    /// Coplanarity tolerance as a fraction of the mesh diameter; <= 0 uses 1e-9.
    double coplanar_tol_rel = 0.0;

    static std::vector<double> default_axis_angles();
};

struct CounterexampleResult {
    Mesh mesh;           // vertices A,B,C,D,V,B1,A1,V1 = 0..7
    VertexField field;   // unique extension of the T2 field
    int axis_index = 0;
    Vec3 axis = Vec3::Zero();
    double flux_p = 0.0;
    double flux_t1 = 0.0;
    double flux_t2 = 0.0;
    double area_abc = 0.0;
    double predicate_tol = 0.0;
    std::array<bool, 8> star_coplanar{};
    std::array<bool, 8> edges_coplanar{};
};

/// Glues the line-symmetric octahedron sharing triangles ABV and AVB1 onto
/// T2 along the quadrilateral A-B-V-B1 (the shared faces are removed from
/// both pieces; their common edge AV disappears). Axis candidates are tried
/// in order until the mesh validates, the field extends, and the coplanarity
/// predicates reject every vertex the axis can influence; B and C always
/// keep one coplanar edge triple inside the base plane ABC, so they are
/// exempt from the gate and reported as-is. Throws
/// PredicateFailureExhausted when no candidate passes.
CounterexampleResult build_counterexample(const CounterexampleParams& params);

struct DeltaKParams {
    double l = 1.0;
    std::vector<double> bd_points;                      // parameters in (0,1) along B->D
    std::vector<std::array<double, 3>> abd_points;      // barycentric w.r.t. (A,B,D)
    std::vector<std::array<double, 3>> bcd_points;      // barycentric w.r.t. (B,C,D)
};

/// One-parameter tetrahedral family: |BC| = |CD| = |BD| = 1,
/// |AB| = |AC| = |AD| = l, optionally refined by vertices on the open
/// segment BD and inside the open triangles ABD and BCD. Total mean
/// curvature is independent of the refinement. Requires l > 1/sqrt(3).
Mesh delta_k_mesh(const DeltaKParams& params);

struct DeltaKClosedForm {
    double total_mean_curvature = 0.0;
    double phi = 0.0;      // dihedral at BC, derived from coordinates
    double psi = 0.0;      // dihedral at AC
    double phi_alt = 0.0;  // alternative closed form kept for comparison reports
};

/// M(l) = (3/2)(pi - phi) + (3/2) l (pi - psi) with
/// phi = arccos(1 / (sqrt(3) sqrt(4 l^2 - 1))) and
/// psi = arccos((2 l^2 - 1) / (4 l^2 - 1)). `phi_alt` records
/// arccos(1 / (2 sqrt(3) sqrt(4 l^2 - 1))), which disagrees with the
/// coordinate dihedral (see the deltak report column).
DeltaKClosedForm delta_k_closed_form(double l);

}  // namespace polyflex
