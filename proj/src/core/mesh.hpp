#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "core/error.hpp"

namespace polyflex {

using Vec3 = Eigen::Vector3d;

/// Undirected edge of a closed oriented triangle mesh. `face1` is the face
/// that traverses the edge as (v0 -> v1); `face2` traverses it (v1 -> v0).
struct EdgeRecord {
    int v0 = 0, v1 = 0;  // v0 < v1
    int face1 = 0, face2 = 0;
    double length = 0.0;
};

struct MetricSummary {
    double total_mean_curvature = 0.0;
    double oriented_volume = 0.0;
    int euler_characteristic = 0;
};

/// Closed, consistently oriented triangulated surface. Self-intersections of
/// the embedding are permitted and never checked. Immutable after
/// construction; cheap to copy, safe to share across threads for reads.
class Mesh {
public:
    /// Validates and builds. Throws Error on: NonManifoldEdge (an undirected
    /// edge not in exactly two faces), InconsistentOrientation (a directed
    /// edge repeated), DegenerateFace (repeated vertex or area below
    /// 1e-12 * diameter^2), IndexOutOfRange.
    static Mesh build(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces);

    /// Same connectivity with new vertex positions. Re-checks face areas only
    /// (the combinatorics are unchanged); throws DegenerateFace.
    Mesh displaced_positions(std::vector<Vec3> vertices) const;

    /// All faces reversed (orientation flip); edge set is unchanged.
    Mesh reversed() const;

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int face_count() const { return static_cast<int>(faces_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int euler_characteristic() const { return vertex_count() - edge_count() + face_count(); }

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& faces() const { return faces_; }

    /// Edges sorted lexicographically by (v0, v1); this order fixes the rows
    /// of the rigidity matrix and every per-edge report.
    const std::vector<EdgeRecord>& edges() const { return edges_; }

    /// Largest pairwise vertex distance.
    double diameter() const { return diameter_; }

    Vec3 face_normal(int face) const;
    double face_area(int face) const;

    /// Interior dihedral angle in (0, 2pi) at an edge, by the oriented-normal
    /// convention: alpha = pi - atan2((n1 x n2) . e, n1 . n2) with e the unit
    /// edge vector as traversed by face1. Coplanar faces give pi; convex
    /// edges of a positively oriented convex solid give values below pi.
    double dihedral_angle(const EdgeRecord& edge) const;

    /// Dihedral by endpoints (order irrelevant). Throws IndexOutOfRange if
    /// the pair is not an edge.
    double dihedral_angle(int i, int j) const;

    /// (1/2) * sum over edges of length * (pi - dihedral).
    double total_mean_curvature() const;

    /// (1/6) * sum over faces (a,b,c) of det(p_a, p_b, p_c).
    double oriented_volume() const;

    MetricSummary metric_summary() const;

    /// True iff all vertices of all faces incident to `v` lie within `tol`
    /// of their best-fit plane (plane from the smallest singular value of
    /// the centered neighborhood).
    bool vertex_star_coplanar(int v, double tol) const;

    /// True iff some 3-subset of unit edge directions at `v` has a scalar
    /// triple product of magnitude below `tol`.
    bool three_incident_edges_coplanar(int v, double tol) const;

    /// Replaces face (a,b,c) by (a,b,v),(b,c,v),(c,a,v) with v the given
    /// strictly interior barycentric point. Leaves total mean curvature and
    /// oriented volume unchanged.
    Mesh subdivide_face(int face, const std::array<double, 3>& barycentric) const;

    int find_edge(int i, int j) const;  // -1 if absent

private:
    Mesh() = default;
    void build_edges_and_validate();

    std::vector<Vec3> vertices_;
    std::vector<std::array<int, 3>> faces_;
    std::vector<EdgeRecord> edges_;
    double diameter_ = 0.0;
};

/// |V| of the tetrahedron with the given edge lengths, ordered
/// (d01, d02, d03, d12, d13, d23) for vertices 0..3. 288 V^2 equals the
/// 5x5 Cayley-Menger determinant of the squared lengths. Throws
/// NotRealizable when the determinant is negative beyond tolerance.
double cayley_menger_volume(const std::array<double, 6>& lengths);

}  // namespace polyflex
