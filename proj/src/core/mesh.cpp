#include "core/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace polyflex {

namespace {
constexpr double kDegenerateAreaRel = 1e-12;

double pairwise_diameter(const std::vector<Vec3>& pts) {
    double d2 = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            d2 = std::max(d2, (pts[i] - pts[j]).squaredNorm());
    return std::sqrt(d2);
}
}  // namespace

Mesh Mesh::build(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces) {
    Mesh m;
    m.vertices_ = std::move(vertices);
    m.faces_ = std::move(faces);
    m.build_edges_and_validate();
    return m;
}

Mesh Mesh::displaced_positions(std::vector<Vec3> vertices) const {
    if (vertices.size() != vertices_.size())
        throw Error(ErrorCode::IndexOutOfRange, "vertex count mismatch in displacement");
    Mesh m;
    m.vertices_ = std::move(vertices);
    m.faces_ = faces_;
    m.diameter_ = pairwise_diameter(m.vertices_);
    const double area_tol = kDegenerateAreaRel * m.diameter_ * m.diameter_;
    m.edges_ = edges_;
    for (auto& e : m.edges_) e.length = (m.vertices_[e.v0] - m.vertices_[e.v1]).norm();
    for (int f = 0; f < m.face_count(); ++f) {
        if (m.face_area(f) < area_tol) {
            std::ostringstream os;
            os << "face " << f << " degenerate at displaced configuration";
            throw Error(ErrorCode::DegenerateFace, os.str());
        }
    }
    return m;
}

Mesh Mesh::reversed() const {
    std::vector<std::array<int, 3>> rev;
    rev.reserve(faces_.size());
    for (const auto& f : faces_) rev.push_back({f[0], f[2], f[1]});
    Mesh m;
    m.vertices_ = vertices_;
    m.faces_ = std::move(rev);
    m.build_edges_and_validate();
    return m;
}

void Mesh::build_edges_and_validate() {
    const int nv = vertex_count();
    diameter_ = pairwise_diameter(vertices_);
    const double area_tol = kDegenerateAreaRel * diameter_ * diameter_;

    std::map<std::pair<int, int>, int> directed;  // (from,to) -> face
    std::vector<int> vertex_face_degree(nv, 0);
    for (int fi = 0; fi < face_count(); ++fi) {
        const auto& f = faces_[fi];
        for (int k = 0; k < 3; ++k) {
            if (f[k] < 0 || f[k] >= nv) {
                std::ostringstream os;
                os << "face " << fi << " references vertex " << f[k] << " (have " << nv << ")";
                throw Error(ErrorCode::IndexOutOfRange, os.str());
            }
        }
        if (f[0] == f[1] || f[1] == f[2] || f[2] == f[0]) {
            std::ostringstream os;
            os << "face " << fi << " repeats a vertex";
            throw Error(ErrorCode::DegenerateFace, os.str());
        }
        if (face_area(fi) < area_tol) {
            std::ostringstream os;
            os << "face " << fi << " has near-zero area";
            throw Error(ErrorCode::DegenerateFace, os.str());
        }
        for (int k = 0; k < 3; ++k) {
            const int u = f[k], v = f[(k + 1) % 3];
            auto [it, inserted] = directed.emplace(std::make_pair(u, v), fi);
            if (!inserted) {
                std::ostringstream os;
                os << "directed edge (" << u << "," << v << ") appears in faces " << it->second
                   << " and " << fi;
                throw Error(ErrorCode::InconsistentOrientation, os.str());
            }
            vertex_face_degree[u]++;
        }
    }

    edges_.clear();
    for (const auto& [uv, fi] : directed) {
        const auto [u, v] = uv;
        auto rev = directed.find(std::make_pair(v, u));
        if (rev == directed.end()) {
            std::ostringstream os;
            os << "edge (" << u << "," << v << ") lies in only one face";
            throw Error(ErrorCode::NonManifoldEdge, os.str());
        }
        if (u > v) continue;
        EdgeRecord e;
        e.v0 = u;
        e.v1 = v;
        e.face1 = fi;
        e.face2 = rev->second;
        e.length = (vertices_[u] - vertices_[v]).norm();
        edges_.push_back(e);
    }

    for (int v = 0; v < nv; ++v) {
        if (vertex_face_degree[v] < 3) {
            std::ostringstream os;
            os << "vertex " << v << " is referenced by " << vertex_face_degree[v]
               << " faces (need >= 3 on a closed surface)";
            throw Error(ErrorCode::NonManifoldEdge, os.str());
        }
    }
}

Vec3 Mesh::face_normal(int face) const {
    const auto& f = faces_[face];
    const Vec3 n = (vertices_[f[1]] - vertices_[f[0]]).cross(vertices_[f[2]] - vertices_[f[0]]);
    const double len = n.norm();
    if (len == 0.0) throw Error(ErrorCode::DegenerateFace, "zero normal");
    return n / len;
}

double Mesh::face_area(int face) const {
    const auto& f = faces_[face];
    return 0.5 *
           (vertices_[f[1]] - vertices_[f[0]]).cross(vertices_[f[2]] - vertices_[f[0]]).norm();
}

double Mesh::dihedral_angle(const EdgeRecord& edge) const {
    const Vec3 n1 = face_normal(edge.face1);
    const Vec3 n2 = face_normal(edge.face2);
    const Vec3 e = (vertices_[edge.v1] - vertices_[edge.v0]).normalized();
    const double theta = std::atan2(n1.cross(n2).dot(e), n1.dot(n2));
    return M_PI - theta;
}

double Mesh::dihedral_angle(int i, int j) const {
    const int e = find_edge(i, j);
    if (e < 0) {
        std::ostringstream os;
        os << "(" << i << "," << j << ") is not an edge";
        throw Error(ErrorCode::IndexOutOfRange, os.str());
    }
    return dihedral_angle(edges_[e]);
}

int Mesh::find_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(i, j),
                               [](const EdgeRecord& e, const std::pair<int, int>& k) {
                                   return std::make_pair(e.v0, e.v1) < k;
                               });
    if (it == edges_.end() || it->v0 != i || it->v1 != j) return -1;
    return static_cast<int>(it - edges_.begin());
}

double Mesh::total_mean_curvature() const {
    double sum = 0.0;
    for (const auto& e : edges_) sum += e.length * (M_PI - dihedral_angle(e));
    return 0.5 * sum;
}

double Mesh::oriented_volume() const {
    double sum = 0.0;
    for (const auto& f : faces_)
        sum += vertices_[f[0]].dot(vertices_[f[1]].cross(vertices_[f[2]]));
    return sum / 6.0;
}

MetricSummary Mesh::metric_summary() const {
    return {total_mean_curvature(), oriented_volume(), euler_characteristic()};
}

bool Mesh::vertex_star_coplanar(int v, double tol) const {
    if (v < 0 || v >= vertex_count())
        throw Error(ErrorCode::IndexOutOfRange, "vertex index out of range");
    std::set<int> star;
    for (const auto& f : faces_)
        if (f[0] == v || f[1] == v || f[2] == v) star.insert(f.begin(), f.end());
    Eigen::MatrixXd pts(star.size(), 3);
    int r = 0;
    Vec3 centroid = Vec3::Zero();
    for (int u : star) centroid += vertices_[u];
    centroid /= static_cast<double>(star.size());
    for (int u : star) pts.row(r++) = (vertices_[u] - centroid).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(pts, Eigen::ComputeThinV);
    const Vec3 normal = svd.matrixV().col(2);
    return (pts * normal).cwiseAbs().maxCoeff() < tol;
}

bool Mesh::three_incident_edges_coplanar(int v, double tol) const {
    if (v < 0 || v >= vertex_count())
        throw Error(ErrorCode::IndexOutOfRange, "vertex index out of range");
    std::vector<Vec3> dirs;
    for (const auto& e : edges_) {
        if (e.v0 == v) dirs.push_back((vertices_[e.v1] - vertices_[v]).normalized());
        if (e.v1 == v) dirs.push_back((vertices_[e.v0] - vertices_[v]).normalized());
    }
    const int n = static_cast<int>(dirs.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                if (std::abs(dirs[i].cross(dirs[j]).dot(dirs[k])) < tol) return true;
    return false;
}

Mesh Mesh::subdivide_face(int face, const std::array<double, 3>& barycentric) const {
    if (face < 0 || face >= face_count())
        throw Error(ErrorCode::IndexOutOfRange, "face index out of range");
    const double wsum = barycentric[0] + barycentric[1] + barycentric[2];
    if (!(barycentric[0] > 0.0) || !(barycentric[1] > 0.0) || !(barycentric[2] > 0.0) ||
        std::abs(wsum - 1.0) > 1e-12)
        throw Error(ErrorCode::InvalidBarycentric,
                    "weights must be strictly positive and sum to 1");
    const auto& f = faces_[face];
    const Vec3 p = barycentric[0] * vertices_[f[0]] + barycentric[1] * vertices_[f[1]] +
                   barycentric[2] * vertices_[f[2]];
    std::vector<Vec3> verts = vertices_;
    verts.push_back(p);
    const int vnew = static_cast<int>(verts.size()) - 1;
    std::vector<std::array<int, 3>> fs;
    fs.reserve(faces_.size() + 2);
    for (int i = 0; i < face_count(); ++i)
        if (i != face) fs.push_back(faces_[i]);
    fs.push_back({f[0], f[1], vnew});
    fs.push_back({f[1], f[2], vnew});
    fs.push_back({f[2], f[0], vnew});
    return Mesh::build(std::move(verts), std::move(fs));
}

double cayley_menger_volume(const std::array<double, 6>& lengths) {
    for (double l : lengths)
        if (!(l > 0.0)) throw Error(ErrorCode::InvalidParameter, "lengths must be positive");
    const double d01 = lengths[0] * lengths[0], d02 = lengths[1] * lengths[1],
                 d03 = lengths[2] * lengths[2], d12 = lengths[3] * lengths[3],
                 d13 = lengths[4] * lengths[4], d23 = lengths[5] * lengths[5];
    Eigen::Matrix<double, 5, 5> cm;
    cm << 0, 1, 1, 1, 1,
          1, 0, d01, d02, d03,
          1, d01, 0, d12, d13,
          1, d02, d12, 0, d23,
          1, d03, d13, d23, 0;
    const double det = cm.determinant();
    double scale = 0.0;
    for (double l : lengths) scale = std::max(scale, l * l);
    const double tol = 1e-12 * scale * scale * scale * scale;
    if (det < -tol)
        throw Error(ErrorCode::NotRealizable, "edge lengths admit no tetrahedron");
    return std::sqrt(std::max(det, 0.0) / 288.0);
}

}  // namespace polyflex
