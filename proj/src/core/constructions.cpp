#include "core/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace polyflex {

namespace {

double tetra_det(const std::array<Vec3, 4>& t) {
    return (t[1] - t[0]).dot((t[2] - t[0]).cross(t[3] - t[0]));
}

std::array<int, 3> canonical_cycle(const std::array<int, 3>& f) {
    int k = 0;
    if (f[1] < f[k]) k = 1;
    if (f[2] < f[k]) k = 2;
    return {f[k], f[(k + 1) % 3], f[(k + 2) % 3]};
}

}  // namespace

T1 build_t1(const std::array<Vec3, 4>& tetra, const std::array<double, 3>& barycentric,
            double s) {
    const double wsum = barycentric[0] + barycentric[1] + barycentric[2];
    if (!(barycentric[0] > 0.0) || !(barycentric[1] > 0.0) || !(barycentric[2] > 0.0) ||
        std::abs(wsum - 1.0) > 1e-12)
        throw Error(ErrorCode::InvalidBarycentric,
                    "weights must be strictly positive and sum to 1");
    double scale = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) scale = std::max(scale, (tetra[i] - tetra[j]).norm());
    const double det = tetra_det(tetra);
    if (std::abs(det) < 1e-12 * scale * scale * scale)
        throw Error(ErrorCode::InvalidParameter, "degenerate tetrahedron");

    const Vec3 vpos = barycentric[0] * tetra[0] + barycentric[1] * tetra[1] +
                      barycentric[2] * tetra[2];
    std::vector<Vec3> verts(tetra.begin(), tetra.end());
    verts.push_back(vpos);

    // outward orientation, with the subdivided side last
    std::vector<std::array<int, 3>> faces;
    if (det < 0)
        faces = {{0, 2, 3}, {0, 3, 1}, {1, 3, 2}, {0, 1, 4}, {1, 2, 4}, {2, 0, 4}};
    else
        faces = {{0, 3, 2}, {0, 1, 3}, {1, 2, 3}, {0, 2, 4}, {2, 1, 4}, {1, 0, 4}};

    T1 out{Mesh::build(std::move(verts), std::move(faces)), VertexField(5, Vec3::Zero())};
    out.field[4] = s * out.mesh.face_normal(3);  // all three star faces are coplanar
    return out;
}

T2 build_t2(const std::array<Vec3, 4>& tetra, const std::array<double, 3>& barycentric,
            double s, const Vec3& apex) {
    T1 t1 = build_t1(tetra, barycentric, s);
    const Vec3 n = t1.mesh.face_normal(3);
    if (std::abs((apex - tetra[0]).dot(n)) < 1e-12 * t1.mesh.diameter())
        throw Error(ErrorCode::CoplanarApex, "apex lies in the plane ABC");

    std::vector<Vec3> verts = t1.mesh.vertices();
    verts.push_back(apex);
    std::vector<std::array<int, 3>> faces;
    for (const auto& f : t1.mesh.faces()) {
        if (std::set<int>(f.begin(), f.end()) == std::set<int>{0, 2, 4}) {
            // replace face ACV with the pyramid over its boundary cycle
            faces.push_back({f[0], f[1], 5});
            faces.push_back({f[1], f[2], 5});
            faces.push_back({f[2], f[0], 5});
        } else {
            faces.push_back(f);
        }
    }
    Mesh mesh = Mesh::build(std::move(verts), std::move(faces));
    std::map<int, Vec3> known;
    for (int i = 0; i < 5; ++i) known[i] = t1.field[i];
    VertexField w = extend_field(mesh, known);
    return {std::move(mesh), std::move(w)};
}

Mesh bricard_type1(const BricardSeed& seed) {
    const auto sigma = [](const Vec3& p) { return Vec3(-p.x(), -p.y(), p.z()); };
    std::vector<Vec3> verts = {seed.a, seed.b, sigma(seed.a), sigma(seed.b), seed.v, sigma(seed.v)};
    double scale = 0.0;
    for (const auto& p : verts) scale = std::max(scale, p.norm());
    for (size_t i = 0; i < verts.size(); ++i)
        for (size_t j = i + 1; j < verts.size(); ++j)
            if ((verts[i] - verts[j]).norm() < 1e-12 * std::max(scale, 1.0))
                throw Error(ErrorCode::DegenerateFace,
                            "seed places two octahedron vertices at the same point");
    // disk around V over the quadrilateral A-B-A1-B1, plus its mirror around V1
    std::vector<std::array<int, 3>> faces = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4},
                                             {1, 0, 5}, {0, 3, 5}, {3, 2, 5}, {2, 1, 5}};
    return Mesh::build(std::move(verts), std::move(faces));
}

BricardSeed bricard_seed_preset(int k) {
    static const std::array<BricardSeed, 5> presets = {{
        {{1.2, 0.0, 0.3}, {0.0, 1.0, -0.4}, {0.3, -0.5, 1.1}},
        {{1.0, 0.1, 0.25}, {-0.2, 0.9, -0.3}, {0.4, -0.45, 0.95}},
        {{1.3, -0.1, 0.5}, {0.1, 1.1, -0.55}, {0.2, -0.6, 1.2}},
        {{0.9, 0.2, 0.35}, {-0.15, 1.05, -0.45}, {0.5, -0.4, 1.0}},
        {{1.1, -0.05, 0.4}, {0.05, 0.95, -0.35}, {0.35, -0.55, 1.05}},
    }};
    if (k < 0) throw Error(ErrorCode::InvalidParameter, "preset index must be >= 0");
    return presets[static_cast<size_t>(k) % presets.size()];
}

std::vector<double> CounterexampleParams::default_axis_angles() {
    std::vector<double> out;
    for (int k = 0; k < 32; ++k) out.push_back(0.15 + 2.0 * M_PI * k / 32.0);
    return out;
}

CounterexampleResult build_counterexample(const CounterexampleParams& params) {
    T1 t1 = build_t1(params.tetra, params.v_barycentric, params.flex_magnitude);
    T2 t2 = build_t2(params.tetra, params.v_barycentric, params.flex_magnitude, params.apex);

    const Vec3 b = params.tetra[1];
    const Vec3 b1 = params.apex;
    const Vec3 mid = 0.5 * (b + b1);
    const Vec3 bb = (b1 - b).normalized();
    Vec3 ref = Vec3::UnitX();
    if (std::abs(ref.dot(bb)) > 0.9) ref = Vec3::UnitY();
    const Vec3 u = bb.cross(ref).normalized();
    const Vec3 v = bb.cross(u);

    // the two shared triangles, as oriented in T2
    std::vector<std::array<int, 3>> removed;
    for (const auto& f : t2.mesh.faces()) {
        const std::set<int> fs(f.begin(), f.end());
        if (fs == std::set<int>{0, 1, 4} || fs == std::set<int>{0, 4, 5}) removed.push_back(f);
    }
    std::set<std::array<int, 3>> need;
    for (const auto& f : removed) need.insert(canonical_cycle({f[2], f[1], f[0]}));

    const Vec3 vpos = t1.mesh.vertices()[4];
    std::string last_failure = "no axis candidates";
    for (size_t ai = 0; ai < params.axis_angles.size(); ++ai) {
        const double theta = params.axis_angles[ai];
        const Vec3 d = std::cos(theta) * u + std::sin(theta) * v;
        const auto half_turn = [&](const Vec3& p) {
            const Vec3 q = p - mid;
            return Vec3(mid + 2.0 * q.dot(d) * d - q);
        };
        const Vec3 a1 = half_turn(params.tetra[0]);
        const Vec3 v1 = half_turn(vpos);

        // octahedron faces in glued indexing A,B,A1,B1,V,V1 -> 0,1,6,5,4,7
        static const int remap[6] = {0, 1, 6, 5, 4, 7};
        std::vector<std::array<int, 3>> oct = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4},
                                               {1, 0, 5}, {0, 3, 5}, {3, 2, 5}, {2, 1, 5}};
        for (auto& f : oct) f = {remap[f[0]], remap[f[1]], remap[f[2]]};

        // orient the octahedron piece so its copy of the shared triangles
        // reverses the T2 orientation, then drop those two faces
        std::vector<std::array<int, 3>> piece;
        bool matched = false;
        for (int flip = 0; flip < 2 && !matched; ++flip) {
            std::vector<std::array<int, 3>> cand = oct;
            if (flip) for (auto& f : cand) std::swap(f[1], f[2]);
            std::set<std::array<int, 3>> cycles;
            for (const auto& f : cand) cycles.insert(canonical_cycle(f));
            if (std::includes(cycles.begin(), cycles.end(), need.begin(), need.end())) {
                matched = true;
                for (const auto& f : cand) {
                    const std::set<int> fs(f.begin(), f.end());
                    if (fs != std::set<int>{0, 1, 4} && fs != std::set<int>{0, 4, 5})
                        piece.push_back(f);
                }
            }
        }
        if (!matched) {
            last_failure = "octahedron orientation does not match the patch";
            continue;
        }

        std::vector<Vec3> verts = t2.mesh.vertices();
        verts.push_back(a1);
        verts.push_back(v1);
        std::vector<std::array<int, 3>> faces;
        for (const auto& f : t2.mesh.faces()) {
            const std::set<int> fs(f.begin(), f.end());
            if (fs == std::set<int>{0, 1, 4} || fs == std::set<int>{0, 4, 5}) continue;
            faces.push_back(f);
        }
        faces.insert(faces.end(), piece.begin(), piece.end());

        std::optional<Mesh> glued;
        VertexField field;
        try {
            glued = Mesh::build(std::move(verts), std::move(faces));
            std::map<int, Vec3> known;
            for (int i = 0; i < 6; ++i) known[i] = t2.field[i];
            field = extend_field(*glued, known);
        } catch (const Error& e) {
            last_failure = e.what();
            continue;
        }

        const double rel = params.coplanar_tol_rel > 0 ? params.coplanar_tol_rel : 1e-9;
        const double tol = rel * glued->diameter();
        std::array<bool, 8> star{}, edges{};
        bool gate_ok = true;
        for (int vtx = 0; vtx < 8; ++vtx) {
            star[vtx] = glued->vertex_star_coplanar(vtx, tol);
            edges[vtx] = glued->three_incident_edges_coplanar(vtx, tol);
            if (star[vtx]) gate_ok = false;
            // B (1) and C (2) keep the coplanar triple inside the plane ABC for
            // every axis; the gate filters only failures the axis can change.
            if (edges[vtx] && vtx != 1 && vtx != 2) gate_ok = false;
        }
        if (!gate_ok) {
            last_failure = "coplanarity predicates rejected the glued mesh";
            continue;
        }

        CounterexampleResult res{std::move(*glued), std::move(field),
                                 static_cast<int>(ai), d, 0, 0, 0, 0, tol, star, edges};
        res.flux_t1 = flux(t1.mesh, t1.field);
        res.flux_t2 = flux(t2.mesh, t2.field);
        res.flux_p = flux(res.mesh, res.field);
        res.area_abc = 0.5 * (params.tetra[1] - params.tetra[0])
                                 .cross(params.tetra[2] - params.tetra[0])
                                 .norm();
        return res;
    }
    throw Error(ErrorCode::PredicateFailureExhausted,
                "no sampled axis direction passed (" + last_failure + ")");
}

namespace {

Mesh insert_interior_point(const Mesh& mesh, const Vec3& p, const char* region) {
    const double plane_tol = 1e-12 * mesh.diameter();
    for (int fi = 0; fi < mesh.face_count(); ++fi) {
        const auto& f = mesh.faces()[fi];
        const Vec3& a = mesh.vertices()[f[0]];
        const Vec3 e0 = mesh.vertices()[f[1]] - a;
        const Vec3 e1 = mesh.vertices()[f[2]] - a;
        const Vec3 q = p - a;
        const Vec3 n = e0.cross(e1);
        if (std::abs(q.dot(n)) / n.norm() > plane_tol) continue;
        const double d00 = e0.dot(e0), d01 = e0.dot(e1), d11 = e1.dot(e1);
        const double d20 = q.dot(e0), d21 = q.dot(e1);
        const double den = d00 * d11 - d01 * d01;
        const double w1 = (d11 * d20 - d01 * d21) / den;
        const double w2 = (d00 * d21 - d01 * d20) / den;
        const double w0 = 1.0 - w1 - w2;
        if (w0 > 1e-9 && w1 > 1e-9 && w2 > 1e-9)
            return mesh.subdivide_face(fi, {w0, w1, w2});
    }
    std::ostringstream os;
    os << "point is not strictly interior to a face of the " << region << " region";
    throw Error(ErrorCode::InvalidSubdivision, os.str());
}

}  // namespace

Mesh delta_k_mesh(const DeltaKParams& params) {
    const double l = params.l;
    const double h2 = l * l - 1.0 / 3.0;
    if (!(h2 > 0.0))
        throw Error(ErrorCode::InvalidParameter, "l must exceed 1/sqrt(3)");
    const Vec3 A(0.5, std::sqrt(3.0) / 6.0, std::sqrt(h2));
    const Vec3 B(0.0, 0.0, 0.0);
    const Vec3 C(1.0, 0.0, 0.0);
    const Vec3 D(0.5, std::sqrt(3.0) / 2.0, 0.0);

    std::vector<double> ts = params.bd_points;
    std::sort(ts.begin(), ts.end());
    for (size_t i = 0; i < ts.size(); ++i) {
        if (!(ts[i] > 0.0) || !(ts[i] < 1.0))
            throw Error(ErrorCode::InvalidSubdivision, "BD parameter outside the open segment");
        if (i > 0 && ts[i] - ts[i - 1] < 1e-9)
            throw Error(ErrorCode::InvalidSubdivision, "duplicate BD parameters");
    }

    std::vector<Vec3> verts = {A, B, C, D};
    std::vector<int> bd;
    for (double t : ts) {
        verts.push_back(B + t * (D - B));
        bd.push_back(static_cast<int>(verts.size()) - 1);
    }
    std::vector<std::array<int, 3>> faces = {{0, 1, 2}, {0, 2, 3}};  // ABC, ACD
    // face ADB fanned from A along D -> B; face BDC fanned from C along B -> D
    std::vector<int> path = {3};
    for (auto it = bd.rbegin(); it != bd.rend(); ++it) path.push_back(*it);
    path.push_back(1);
    for (size_t i = 0; i + 1 < path.size(); ++i) faces.push_back({0, path[i], path[i + 1]});
    path.assign({1});
    for (int idx : bd) path.push_back(idx);
    path.push_back(3);
    for (size_t i = 0; i + 1 < path.size(); ++i) faces.push_back({2, path[i], path[i + 1]});

    Mesh mesh = Mesh::build(std::move(verts), std::move(faces));

    const auto bary_point = [](const Vec3& p0, const Vec3& p1, const Vec3& p2,
                               const std::array<double, 3>& w) {
        if (!(w[0] > 0.0) || !(w[1] > 0.0) || !(w[2] > 0.0) ||
            std::abs(w[0] + w[1] + w[2] - 1.0) > 1e-12)
            throw Error(ErrorCode::InvalidSubdivision,
                        "interior point weights must be strictly positive and sum to 1");
        return Vec3(w[0] * p0 + w[1] * p1 + w[2] * p2);
    };
    for (const auto& w : params.abd_points)
        mesh = insert_interior_point(mesh, bary_point(A, B, D, w), "ABD");
    for (const auto& w : params.bcd_points)
        mesh = insert_interior_point(mesh, bary_point(B, C, D, w), "BCD");
    return mesh;
}

DeltaKClosedForm delta_k_closed_form(double l) {
    if (!(l * l > 1.0 / 3.0) || !(l > 0.0))
        throw Error(ErrorCode::InvalidParameter, "l must exceed 1/sqrt(3)");
    const double root = std::sqrt(4.0 * l * l - 1.0);
    DeltaKClosedForm out;
    out.phi = std::acos(1.0 / (std::sqrt(3.0) * root));
    out.psi = std::acos((2.0 * l * l - 1.0) / (4.0 * l * l - 1.0));
    out.phi_alt = std::acos(1.0 / (2.0 * std::sqrt(3.0) * root));
    out.total_mean_curvature = 1.5 * (M_PI - out.phi) + 1.5 * l * (M_PI - out.psi);
    return out;
}

}  // namespace polyflex
