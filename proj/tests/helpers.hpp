#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "core/mesh.hpp"

namespace testhelpers {

using polyflex::Mesh;
using polyflex::Vec3;

// unit-edge regular tetrahedron, apex above the z=0 base triangle
inline std::array<Vec3, 4> regular_tetra_points() {
    return {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2.0, 0),
            Vec3(0.5, std::sqrt(3.0) / 6.0, std::sqrt(2.0 / 3.0))};
}

// outward-oriented tetrahedron on arbitrary nondegenerate points
inline Mesh tetra_mesh(const std::array<Vec3, 4>& p) {
    const double det = (p[1] - p[0]).dot((p[2] - p[0]).cross(p[3] - p[0]));
    std::vector<std::array<int, 3>> faces;
    if (det < 0)
        faces = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
    else
        faces = {{0, 2, 1}, {0, 3, 2}, {0, 1, 3}, {1, 2, 3}};
    return Mesh::build({p.begin(), p.end()}, std::move(faces));
}

inline Mesh unit_cube_mesh() {
    std::vector<Vec3> v;
    for (int z = 0; z <= 1; ++z)
        for (int y = 0; y <= 1; ++y)
            for (int x = 0; x <= 1; ++x) v.emplace_back(x, y, z);
    const auto quad = [](std::vector<std::array<int, 3>>& f, int a, int b, int c, int d) {
        f.push_back({a, b, c});
        f.push_back({a, c, d});
    };
    std::vector<std::array<int, 3>> f;
    quad(f, 0, 2, 3, 1);  // z = 0, outward -z
    quad(f, 4, 5, 7, 6);  // z = 1
    quad(f, 0, 1, 5, 4);  // y = 0
    quad(f, 2, 6, 7, 3);  // y = 1
    quad(f, 0, 4, 6, 2);  // x = 0
    quad(f, 1, 3, 7, 5);  // x = 1
    return Mesh::build(std::move(v), std::move(f));
}

inline Mesh octahedron_mesh(double jitter = 0.0, unsigned seed = 0) {
    std::vector<Vec3> v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    if (jitter > 0.0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-jitter, jitter);
        for (auto& p : v) p += Vec3(u(rng), u(rng), u(rng));
    }
    std::vector<std::array<int, 3>> f = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                         {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    return Mesh::build(std::move(v), std::move(f));
}

inline std::array<Vec3, 4> random_tetra_points(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        std::array<Vec3, 4> p;
        for (auto& q : p) q = Vec3(u(rng), u(rng), u(rng));
        const double vol6 = std::abs((p[1] - p[0]).dot((p[2] - p[0]).cross(p[3] - p[0])));
        if (vol6 / 6.0 > 1e-3) return p;
    }
}

// dihedral between the half-planes through edge (e0,e1) containing pa and pb;
// independent of the library's oriented-normal formula
inline double dihedral_by_projection(const Vec3& e0, const Vec3& e1, const Vec3& pa,
                                     const Vec3& pb) {
    const Vec3 axis = (e1 - e0).normalized();
    const Vec3 qa = (pa - e0) - axis.dot(pa - e0) * axis;
    const Vec3 qb = (pb - e0) - axis.dot(pb - e0) * axis;
    return std::acos(qa.normalized().dot(qb.normalized()));
}

}  // namespace testhelpers
