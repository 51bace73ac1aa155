#include "core/rigidity.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace polyflex {

Eigen::VectorXd field_to_flat(const VertexField& w) {
    Eigen::VectorXd x(3 * w.size());
    for (size_t i = 0; i < w.size(); ++i) x.segment<3>(3 * i) = w[i];
    return x;
}

VertexField field_from_flat(const Eigen::VectorXd& x) {
    VertexField w(x.size() / 3);
    for (size_t i = 0; i < w.size(); ++i) w[i] = x.segment<3>(3 * i);
    return w;
}

VertexField load_field_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("field") || !j["field"].is_array())
        throw Error(ErrorCode::ParseError, path + ": expected {\"field\": [[x,y,z], ...]}");
    VertexField w;
    for (const auto& p : j["field"]) {
        if (!p.is_array() || p.size() != 3)
            throw Error(ErrorCode::ParseError, path + ": field entries must be triples");
        w.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
    return w;
}

void save_field_json(const VertexField& w, const std::string& path) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : w) arr.push_back({v.x(), v.y(), v.z()});
    nlohmann::json j;
    j["field"] = std::move(arr);
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << j.dump() << "\n";
}

Eigen::MatrixXd rigidity_matrix(const Mesh& mesh) {
    const auto& edges = mesh.edges();
    const int m = mesh.edge_count();
    const int n = mesh.vertex_count();
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(m, 3 * n);
    for (int k = 0; k < m; ++k) {
        const Vec3 d = mesh.vertices()[edges[k].v0] - mesh.vertices()[edges[k].v1];
        R.block<1, 3>(k, 3 * edges[k].v0) = d.transpose();
        R.block<1, 3>(k, 3 * edges[k].v1) = -d.transpose();
    }
    return R;
}

std::vector<VertexField> trivial_motion_basis(const Mesh& mesh) {
    const int n = mesh.vertex_count();
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : mesh.vertices()) centroid += p;
    centroid /= static_cast<double>(n);

    Eigen::MatrixXd T(3 * n, 6);
    for (int i = 0; i < n; ++i) {
        const Vec3 q = mesh.vertices()[i] - centroid;
        for (int k = 0; k < 3; ++k) {
            T.block<3, 1>(3 * i, k) = Vec3::Unit(k);
            T.block<3, 1>(3 * i, 3 + k) = Vec3::Unit(k).cross(q);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    if (s(5) < 1e-12 * s(0))
        throw Error(ErrorCode::DegenerateVertexSet,
                    "rigid motions are dependent (collinear vertices)");
    std::vector<VertexField> out;
    out.reserve(6);
    for (int k = 0; k < 6; ++k) out.push_back(field_from_flat(svd.matrixU().col(k)));
    return out;
}

FlexBasis flex_space(const Mesh& mesh, double rank_tol) {
    const auto trivial = trivial_motion_basis(mesh);
    const Eigen::MatrixXd R = rigidity_matrix(mesh);
    const int n3 = static_cast<int>(R.cols());

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullV);
    const Eigen::VectorXd s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    int rank = 0;
    while (rank < s.size() && s(rank) >= rank_tol * smax) ++rank;
    if (rank < s.size() && rank > 0) {
        const double gap = s(rank - 1) / std::max(s(rank), 1e-300);
        if (gap < 100.0) {
            std::ostringstream os;
            os << "kept/dropped singular value ratio " << gap << " is below 100";
            throw Error(ErrorCode::RankGapAmbiguous, os.str());
        }
    }

    const int kdim = n3 - rank;
    Eigen::MatrixXd kernel = svd.matrixV().rightCols(kdim);

    // project out the rigid motions, then re-orthonormalize what is left
    Eigen::MatrixXd T(n3, 6);
    for (int k = 0; k < 6; ++k) T.col(k) = field_to_flat(trivial[k]);
    kernel -= T * (T.transpose() * kernel);

    FlexBasis fb;
    fb.singular_values = s;
    fb.rank_tolerance = rank_tol;
    Eigen::MatrixXd q(n3, kdim);
    int cols = 0;
    for (int k = 0; k < kdim; ++k) {
        Eigen::VectorXd v = kernel.col(k);
        for (int j = 0; j < cols; ++j) v -= q.col(j).dot(v) * q.col(j);
        const double norm = v.norm();
        if (norm > 1e-8) q.col(cols++) = v / norm;
    }
    for (int k = 0; k < cols; ++k) fb.basis.push_back(field_from_flat(q.col(k)));
    return fb;
}

double flux(const Mesh& mesh, const VertexField& w) {
    if (w.size() != static_cast<size_t>(mesh.vertex_count()))
        throw Error(ErrorCode::IndexOutOfRange, "field length does not match mesh");
    const auto& p = mesh.vertices();
    double sum = 0.0;
    for (const auto& f : mesh.faces()) {
        const Vec3 nn = (p[f[1]] - p[f[0]]).cross(p[f[2]] - p[f[0]]);
        sum += nn.dot(w[f[0]] + w[f[1]] + w[f[2]]);
    }
    return sum / 6.0;
}

double volume_derivative(const Mesh& mesh, const VertexField& w) {
    if (w.size() != static_cast<size_t>(mesh.vertex_count()))
        throw Error(ErrorCode::IndexOutOfRange, "field length does not match mesh");
    const auto& p = mesh.vertices();
    double sum = 0.0;
    for (const auto& f : mesh.faces()) {
        sum += w[f[0]].dot(p[f[1]].cross(p[f[2]]));
        sum += p[f[0]].dot(w[f[1]].cross(p[f[2]]));
        sum += p[f[0]].dot(p[f[1]].cross(w[f[2]]));
    }
    return sum / 6.0;
}

double tmc_directional_derivative(const Mesh& mesh, const VertexField& w, double h) {
    if (w.size() != static_cast<size_t>(mesh.vertex_count()))
        throw Error(ErrorCode::IndexOutOfRange, "field length does not match mesh");
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidParameter, "step must be positive");
    std::vector<Vec3> plus = mesh.vertices(), minus = mesh.vertices();
    for (size_t i = 0; i < w.size(); ++i) {
        plus[i] += h * w[i];
        minus[i] -= h * w[i];
    }
    const double mp = mesh.displaced_positions(std::move(plus)).total_mean_curvature();
    const double mm = mesh.displaced_positions(std::move(minus)).total_mean_curvature();
    return (mp - mm) / (2.0 * h);
}

double default_fd_step(const Mesh& mesh, const VertexField& w) {
    double winf = 0.0;
    for (const auto& v : w) winf = std::max(winf, v.lpNorm<Eigen::Infinity>());
    if (winf == 0.0) throw Error(ErrorCode::InvalidParameter, "zero field");
    return 1e-5 * mesh.diameter() / winf;
}

VertexField extend_field(const Mesh& mesh, const std::map<int, Vec3>& known, double rank_tol) {
    const int n = mesh.vertex_count();
    if (known.empty()) throw Error(ErrorCode::InvalidParameter, "no known vertices");
    for (const auto& [v, val] : known) {
        (void)val;
        if (v < 0 || v >= n) throw Error(ErrorCode::IndexOutOfRange, "known vertex out of range");
    }
    std::vector<int> slot(n, -1);
    std::vector<int> unknown;
    for (int v = 0; v < n; ++v)
        if (!known.count(v)) {
            slot[v] = static_cast<int>(unknown.size());
            unknown.push_back(v);
        }
    const int nu = static_cast<int>(unknown.size());
    const auto& p = mesh.vertices();

    VertexField w(n, Vec3::Zero());
    for (const auto& [v, val] : known) w[v] = val;

    if (nu > 0) {
        std::vector<const EdgeRecord*> active;
        for (const auto& e : mesh.edges())
            if (slot[e.v0] >= 0 || slot[e.v1] >= 0) active.push_back(&e);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(active.size(), 3 * nu);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(active.size());
        for (size_t r = 0; r < active.size(); ++r) {
            const auto& e = *active[r];
            const Vec3 d = p[e.v0] - p[e.v1];
            if (slot[e.v0] >= 0)
                A.block<1, 3>(r, 3 * slot[e.v0]) = d.transpose();
            else
                b(r) -= d.dot(w[e.v0]);
            if (slot[e.v1] >= 0)
                A.block<1, 3>(r, 3 * slot[e.v1]) = -d.transpose();
            else
                b(r) += d.dot(w[e.v1]);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        int rank = 0;
        while (rank < s.size() && s(rank) >= rank_tol * s(0)) ++rank;
        if (rank < 3 * nu) {
            std::ostringstream os;
            os << "extension is not unique (nullity " << 3 * nu - rank << ")";
            throw Error(ErrorCode::UnderdeterminedExtension, os.str());
        }
        svd.setThreshold(rank_tol);
        const Eigen::VectorXd x = svd.solve(b);
        for (int k = 0; k < nu; ++k) w[unknown[k]] = x.segment<3>(3 * k);
    }

    double scale = 0.0;
    for (const auto& v : w) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
    double residual = 0.0;
    for (const auto& e : mesh.edges())
        residual = std::max(residual,
                            std::abs((p[e.v0] - p[e.v1]).dot(w[e.v0] - w[e.v1])));
    if (residual > 1e-8 * mesh.diameter() * std::max(scale, 1e-300)) {
        std::ostringstream os;
        os << "edge-constraint residual " << residual << " exceeds tolerance";
        throw Error(ErrorCode::ExtensionInconsistent, os.str());
    }
    return w;
}

}  // namespace polyflex
