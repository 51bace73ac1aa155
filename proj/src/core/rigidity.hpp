#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/mesh.hpp"

namespace polyflex {

/// One 3-vector per mesh vertex; the piecewise-linear vector field it induces
/// is linear on every face.
using VertexField = std::vector<Vec3>;

Eigen::VectorXd field_to_flat(const VertexField& w);
VertexField field_from_flat(const Eigen::VectorXd& x);

VertexField load_field_json(const std::string& path);
void save_field_json(const VertexField& w, const std::string& path);

inline constexpr double kDefaultRankTol = 1e-8;

/// |E| x 3|V| matrix; the row of edge (i,j) carries (p_i - p_j)^T in the
/// vertex-i block and its negation in the vertex-j block. Rows follow the
/// mesh's sorted edge order.
Eigen::MatrixXd rigidity_matrix(const Mesh& mesh);

/// Six orthonormal fields spanning the first-order rigid motions
/// (translations and rotations about the centroid). Throws
/// DegenerateVertexSet when the vertices are collinear.
std::vector<VertexField> trivial_motion_basis(const Mesh& mesh);

struct FlexBasis {
    std::vector<VertexField> basis;       // orthonormal, orthogonal to trivial motions
    Eigen::VectorXd singular_values;      // full spectrum of the rigidity matrix
    double rank_tolerance = kDefaultRankTol;
    int dimension() const { return static_cast<int>(basis.size()); }
};

/// Nontrivial infinitesimal-flex space: SVD kernel of the rigidity matrix
/// (singular value < tol * sigma_max counts as null), trivial motions
/// projected out, re-orthonormalized. Throws RankGapAmbiguous when the ratio
/// of the smallest kept to the largest dropped singular value is below 100.
FlexBasis flex_space(const Mesh& mesh, double rank_tol = kDefaultRankTol);

/// Integral over the surface of the normal component of the linear
/// interpolant of w: sum over faces of (1/6) [(p_b-p_a) x (p_c-p_a)] . (w_a + w_b + w_c).
double flux(const Mesh& mesh, const VertexField& w);

/// Exact t-derivative at 0 of the oriented volume of the displaced mesh
/// p + t w. Equals flux(mesh, w) on every closed oriented mesh.
double volume_derivative(const Mesh& mesh, const VertexField& w);

/// Central difference [M(p + h w) - M(p - h w)] / (2h). Throws
/// DegenerateFace if a displaced configuration degenerates.
double tmc_directional_derivative(const Mesh& mesh, const VertexField& w, double h);

/// Balanced default step for the central difference above.
double default_fd_step(const Mesh& mesh, const VertexField& w);

/// Solves the edge constraints (p_i - p_j).(w_i - w_j) = 0 in least squares
/// over the vertices absent from `known`, with known values fixed. Throws
/// UnderdeterminedExtension (with the nullity) when the unknown block is
/// rank-deficient and ExtensionInconsistent when the residual exceeds
/// 1e-8 * diameter * field scale.
VertexField extend_field(const Mesh& mesh, const std::map<int, Vec3>& known,
                         double rank_tol = kDefaultRankTol);

}  // namespace polyflex
