#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/constructions.hpp"
#include "core/mesh.hpp"
#include "core/mesh_io.hpp"
#include "helpers.hpp"

using namespace polyflex;
using namespace testhelpers;

namespace {
ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    throw std::logic_error("expected an Error");
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}
}  // namespace

TEST_CASE("validation accepts the regular tetrahedron") {
    const Mesh t = tetra_mesh(regular_tetra_points());
    CHECK(t.vertex_count() == 4);
    CHECK(t.edge_count() == 6);
    CHECK(t.face_count() == 4);
    CHECK(t.euler_characteristic() == 2);
    for (const auto& e : t.edges()) CHECK(e.length == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("validation rejects broken face lists") {
    const auto p = regular_tetra_points();
    std::vector<Vec3> v(p.begin(), p.end());

    CHECK(code_of([&] {
              Mesh::build(v, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 2, 3}});  // one face flipped
          }) == ErrorCode::InconsistentOrientation);
    CHECK(code_of([&] {
              Mesh::build(v, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}});  // open surface
          }) == ErrorCode::NonManifoldEdge);
    CHECK(code_of([&] {
              Mesh::build(v, {{0, 1, 7}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}});
          }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([&] {
              Mesh::build(v, {{0, 1, 1}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}});
          }) == ErrorCode::DegenerateFace);

    auto flat = v;
    flat[3] = 0.5 * (v[0] + v[1]);  // vertex 3 collapses onto edge 01
    CHECK(code_of([&] {
              Mesh::build(flat, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}});
          }) == ErrorCode::DegenerateFace);
}

TEST_CASE("a self-intersecting embedding is a valid mesh") {
    const Mesh octa = bricard_type1(bricard_seed_preset(0));
    CHECK(octa.vertex_count() == 6);
    CHECK(octa.euler_characteristic() == 2);
}

TEST_CASE("dihedral angles: tetrahedron, cube, coplanar faces") {
    const Mesh t = tetra_mesh(regular_tetra_points());
    const auto p = regular_tetra_points();
    const double expected = std::acos(1.0 / 3.0);
    for (const auto& e : t.edges()) {
        CHECK(t.dihedral_angle(e) == doctest::Approx(expected).epsilon(1e-12));
        // independent oracle: angle between half-plane projections
        int oa = -1, ob = -1;
        for (int k = 0; k < 4; ++k)
            if (k != e.v0 && k != e.v1) (oa < 0 ? oa : ob) = k;
        CHECK(t.dihedral_angle(e) ==
              doctest::Approx(dihedral_by_projection(p[e.v0], p[e.v1], p[oa], p[ob]))
                  .epsilon(1e-12));
    }

    const Mesh cube = unit_cube_mesh();
    // axis-aligned cube edges are convex right angles; the face diagonals are flat
    for (const auto& e : cube.edges()) {
        const Vec3 d = cube.vertices()[e.v1] - cube.vertices()[e.v0];
        const bool axis_edge = e.length == doctest::Approx(1.0).epsilon(1e-14);
        (void)d;
        if (axis_edge)
            CHECK(cube.dihedral_angle(e) == doctest::Approx(M_PI / 2).epsilon(1e-12));
        else
            CHECK(cube.dihedral_angle(e) == doctest::Approx(M_PI).epsilon(1e-12));
    }
}

TEST_CASE("convex solids have dihedral angles inside (0, pi)") {
    for (const Mesh& m : {tetra_mesh(regular_tetra_points()), unit_cube_mesh(),
                          octahedron_mesh(0.05, 123)}) {
        for (const auto& e : m.edges()) {
            const double a = m.dihedral_angle(e);
            CHECK(a > 0.0);
            CHECK(a <= M_PI + 1e-12);
        }
    }
}

TEST_CASE("total mean curvature of the canonical solids") {
    const Mesh t = tetra_mesh(regular_tetra_points());
    CHECK(t.total_mean_curvature() ==
          doctest::Approx(3.0 * (M_PI - std::acos(1.0 / 3.0))).epsilon(1e-14));

    // 12 unit edges at pi/2 contribute 3*pi; the 6 diagonals are flat
    CHECK(unit_cube_mesh().total_mean_curvature() == doctest::Approx(3.0 * M_PI).epsilon(1e-14));
}

TEST_CASE("oriented volume and orientation antisymmetry") {
    const Mesh cube = unit_cube_mesh();
    CHECK(cube.oriented_volume() == doctest::Approx(1.0).epsilon(1e-14));
    const Mesh rev = cube.reversed();
    CHECK(rev.oriented_volume() == -cube.oriented_volume());  // exact negation

    for (int k = 0; k < cube.edge_count(); ++k)
        CHECK(rev.edges()[k].length == cube.edges()[k].length);

    // each dihedral maps to 2*pi - alpha, so M flips sign
    const Mesh t = tetra_mesh(regular_tetra_points());
    CHECK(t.reversed().total_mean_curvature() ==
          doctest::Approx(-t.total_mean_curvature()).epsilon(1e-12));

    const double vol = t.oriented_volume();
    CHECK(vol == doctest::Approx(std::sqrt(2.0) / 12.0).epsilon(1e-13));
    CHECK(vol == doctest::Approx(cayley_menger_volume({1, 1, 1, 1, 1, 1})).epsilon(1e-13));
}

TEST_CASE("cayley-menger volume") {
    CHECK(cayley_menger_volume({1, 1, 1, 1, 1, 1}) ==
          doctest::Approx(std::sqrt(2.0) / 12.0).epsilon(1e-14));
    // unit square with its diagonals is flat
    const double r2 = std::sqrt(2.0);
    CHECK(cayley_menger_volume({1, r2, 1, 1, r2, 1}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(code_of([] { cayley_menger_volume({10, 1, 1, 1, 1, 1}); }) == ErrorCode::NotRealizable);
    CHECK(code_of([] { cayley_menger_volume({-1, 1, 1, 1, 1, 1}); }) ==
          ErrorCode::InvalidParameter);

    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_tetra_points(rng);
        const Mesh t = tetra_mesh(p);
        const std::array<double, 6> lengths = {
            (p[0] - p[1]).norm(), (p[0] - p[2]).norm(), (p[0] - p[3]).norm(),
            (p[1] - p[2]).norm(), (p[1] - p[3]).norm(), (p[2] - p[3]).norm()};
        const double vcm = cayley_menger_volume(lengths);
        const double vd = std::abs(t.oriented_volume());
        CHECK(std::abs(vcm - vd) <= 1e-10 * vd);
    }
}

TEST_CASE("coplanarity predicates on T1 and T2") {
    const auto p = regular_tetra_points();
    const T1 t1 = build_t1(p, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const double tol1 = 1e-9 * t1.mesh.diameter();
    CHECK(t1.mesh.vertex_star_coplanar(4, tol1));
    CHECK(t1.mesh.three_incident_edges_coplanar(4, tol1));

    const T2 t2 = build_t2(p, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1.0, Vec3(0.4, 0.1, -0.9));
    const double tol2 = 1e-9 * t2.mesh.diameter();
    CHECK_FALSE(t2.mesh.vertex_star_coplanar(4, tol2));
    CHECK(t2.mesh.three_incident_edges_coplanar(4, tol2));  // VA, VB, VC stay in the base plane

    const Mesh cube = unit_cube_mesh();
    CHECK_FALSE(cube.vertex_star_coplanar(0, 1e-9 * cube.diameter()));

    const Mesh tet = tetra_mesh(p);
    for (int v = 0; v < 4; ++v) {
        CHECK_FALSE(tet.vertex_star_coplanar(v, 1e-9 * tet.diameter()));
        CHECK_FALSE(tet.three_incident_edges_coplanar(v, 1e-9 * tet.diameter()));
    }
}

TEST_CASE("face subdivision keeps the metrics and builds T1's mesh") {
    const Mesh t = tetra_mesh(regular_tetra_points());
    const Mesh s = t.subdivide_face(0, {0.2, 0.3, 0.5});
    CHECK(s.vertex_count() == 5);
    CHECK(s.face_count() == 6);
    CHECK(s.euler_characteristic() == 2);
    CHECK(std::abs(s.total_mean_curvature() - t.total_mean_curvature()) <=
          1e-12 * std::abs(t.total_mean_curvature()));
    CHECK(std::abs(s.oriented_volume() - t.oriented_volume()) <=
          1e-12 * std::abs(t.oriented_volume()));

    CHECK(code_of([&] { t.subdivide_face(0, {1.0, 0.0, 0.0}); }) == ErrorCode::InvalidBarycentric);
    CHECK(code_of([&] { t.subdivide_face(0, {0.5, 0.6, -0.1}); }) == ErrorCode::InvalidBarycentric);
    CHECK(code_of([&] { t.subdivide_face(9, {0.3, 0.3, 0.4}); }) == ErrorCode::IndexOutOfRange);

    // property: random meshes and faces
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.05, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
        const Mesh m = octahedron_mesh(0.1, 1000 + trial);
        double w0 = u(rng), w1 = u(rng) * (1 - w0);
        const int face = static_cast<int>(rng() % m.face_count());
        const Mesh sub = m.subdivide_face(face, {w0, w1, 1 - w0 - w1});
        CHECK(std::abs(sub.total_mean_curvature() - m.total_mean_curvature()) <=
              1e-12 * (1 + std::abs(m.total_mean_curvature())));
        CHECK(std::abs(sub.oriented_volume() - m.oriented_volume()) <=
              1e-12 * (1 + std::abs(m.oriented_volume())));
        CHECK(sub.euler_characteristic() == 2);
    }
}

TEST_CASE("json round trip") {
    const Mesh t = tetra_mesh(regular_tetra_points());
    const auto path = temp_file("polyflex_mesh_rt.json");
    save_mesh_json(t, path.string());
    const Mesh back = load_mesh_json(path.string());
    REQUIRE(back.vertex_count() == t.vertex_count());
    REQUIRE(back.face_count() == t.face_count());
    for (int i = 0; i < t.vertex_count(); ++i)
        CHECK(back.vertices()[i] == t.vertices()[i]);  // lossless doubles
    for (int i = 0; i < t.face_count(); ++i) CHECK(back.faces()[i] == t.faces()[i]);
    std::filesystem::remove(path);
}

TEST_CASE("json parse errors carry a location") {
    const auto path = temp_file("polyflex_mesh_bad.json");
    {
        std::ofstream out(path);
        out << R"({"vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]],)"
            << R"( "faces": [[0,1,2],[0,2,3],[0,3,1],[1,3,9]]})";
    }
    try {
        load_mesh_json(path.string());
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("faces[3]") != std::string::npos);
    }
    {
        std::ofstream out(path);
        out << "{not json";
    }
    CHECK(code_of([&] { load_mesh_json(path.string()); }) == ErrorCode::ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("obj round trip and quad rejection") {
    const Mesh octa = octahedron_mesh(0.07, 9);
    const auto path = temp_file("polyflex_mesh_rt.obj");
    save_mesh_obj(octa, path.string());
    const Mesh back = load_mesh_obj(path.string());
    REQUIRE(back.vertex_count() == octa.vertex_count());
    for (int i = 0; i < octa.vertex_count(); ++i)
        CHECK(back.vertices()[i] == octa.vertices()[i]);  // %.17g round trips exactly
    for (int i = 0; i < octa.face_count(); ++i) CHECK(back.faces()[i] == octa.faces()[i]);

    {
        std::ofstream out(path);
        out << "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
    }
    CHECK(code_of([&] { load_mesh_obj(path.string()); }) == ErrorCode::UnsupportedFace);
    std::filesystem::remove(path);
}
