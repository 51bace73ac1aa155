#include "core/flexpath.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/mesh_io.hpp"

namespace polyflex {

namespace {

struct Gauge {
    Eigen::MatrixXd rows;  // 6 x 3n
    int face = 0;
};

Gauge gauge_rows(const Mesh& mesh, int face) {
    const auto& f = mesh.faces()[face];
    const auto& p = mesh.vertices();
    const Vec3 u1 = (p[f[1]] - p[f[0]]).normalized();
    const Vec3 u3 = u1.cross(p[f[2]] - p[f[0]]).normalized();
    const Vec3 u2 = u3.cross(u1);
    const int n3 = 3 * mesh.vertex_count();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(6, n3);
    G.block<1, 3>(0, 3 * f[0]) = u1.transpose();
    G.block<1, 3>(1, 3 * f[0]) = u2.transpose();
    G.block<1, 3>(2, 3 * f[0]) = u3.transpose();
    G.block<1, 3>(3, 3 * f[1]) = u2.transpose();  // v1 may slide along u1
    G.block<1, 3>(4, 3 * f[1]) = u3.transpose();
    G.block<1, 3>(5, 3 * f[2]) = u3.transpose();  // v2 confined to the initial plane
    return {G, face};
}

void edge_constraints(const std::vector<Vec3>& pos, const std::vector<EdgeRecord>& edges,
                      const Eigen::VectorXd& len2, Eigen::VectorXd& g, Eigen::MatrixXd* jac) {
    const int m = static_cast<int>(edges.size());
    g.resize(m);
    if (jac) jac->setZero(m, 3 * static_cast<int>(pos.size()));
    for (int k = 0; k < m; ++k) {
        const Vec3 d = pos[edges[k].v0] - pos[edges[k].v1];
        g(k) = d.squaredNorm() - len2(k);
        if (jac) {
            jac->block<1, 3>(k, 3 * edges[k].v0) = 2.0 * d.transpose();
            jac->block<1, 3>(k, 3 * edges[k].v1) = -2.0 * d.transpose();
        }
    }
}

Eigen::VectorXd pinv_apply_fixed_rank(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs,
                                      int rank) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    Eigen::VectorXd y = svd.matrixU().transpose() * rhs;
    const int r = std::min<int>(rank, s.size());
    for (int i = 0; i < y.size(); ++i) y(i) = (i < r && s(i) > 0.0) ? y(i) / s(i) : 0.0;
    return svd.matrixV() * y;
}

Eigen::VectorXd pinv_apply_rel(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs,
                               double rel_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double cut = s.size() ? rel_tol * s(0) : 0.0;
    Eigen::VectorXd y = svd.matrixU().transpose() * rhs;
    for (int i = 0; i < y.size(); ++i) y(i) = (s(i) >= cut && s(i) > 0.0) ? y(i) / s(i) : 0.0;
    return svd.matrixV() * y;
}

double max_rel_drift(const std::vector<Vec3>& pos, const std::vector<EdgeRecord>& edges,
                     const Eigen::VectorXd& len0) {
    double worst = 0.0;
    for (size_t k = 0; k < edges.size(); ++k) {
        const double L = (pos[edges[k].v0] - pos[edges[k].v1]).norm();
        worst = std::max(worst, std::abs(L - len0(k)) / len0(k));
    }
    return worst;
}

}  // namespace

TraceResult trace_flex(const Mesh& mesh, const TraceConfig& config) {
    if (config.steps < 1 || !(config.step_size > 0.0) || !(config.newton_tol > 0.0))
        throw Error(ErrorCode::InvalidParameter, "steps >= 1, step size and tolerance > 0");
    if (config.gauge_face < 0 || config.gauge_face >= mesh.face_count())
        throw Error(ErrorCode::InvalidParameter, "gauge face out of range");

    const FlexBasis fb = flex_space(mesh, config.rank_tol);
    if (fb.dimension() < 1)
        throw Error(ErrorCode::NoFlexDirection, "mesh has no nontrivial infinitesimal flex");

    const auto& edges = mesh.edges();
    const int m = mesh.edge_count();
    const int n3 = 3 * mesh.vertex_count();
    const double diam = mesh.diameter();
    Eigen::VectorXd len0(m), len2(m);
    for (int k = 0; k < m; ++k) {
        len0(k) = edges[k].length;
        len2(k) = edges[k].length * edges[k].length;
    }

    // Gauge pins must leave the mechanism visible; repin once if they do not.
    std::vector<Vec3> pos = mesh.vertices();
    Eigen::VectorXd g;
    Eigen::MatrixXd J;
    Gauge gauge = gauge_rows(mesh, config.gauge_face);
    bool repinned = false;
    int rank0 = 0;
    for (;;) {
        edge_constraints(pos, edges, len2, g, &J);
        Eigen::MatrixXd A(m + 6, n3);
        A << J, gauge.rows;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
        const auto& s = svd.singularValues();
        rank0 = 0;
        while (rank0 < s.size() && s(rank0) >= config.rank_tol * s(0)) ++rank0;
        if (n3 - rank0 >= 1) break;
        if (repinned)
            throw Error(ErrorCode::GaugeConflict,
                        "pinned coordinates annihilate the flex direction");
        repinned = true;
        gauge = gauge_rows(mesh, (gauge.face + 1) % mesh.face_count());
    }
    const int corank = n3 - rank0;

    TraceResult out;
    out.frames.push_back(mesh);
    out.report.initial = mesh.metric_summary();
    out.report.gauge_face_used = gauge.face;
    out.report.gauge_repinned = repinned;

    const double conv_tol = config.newton_tol * diam * diam;
    Eigen::VectorXd prev_tan;

    const auto run_corrector = [&](const std::vector<Vec3>& start, bool fixed_rank,
                                   std::vector<Vec3>& result, int& iters) {
        result = start;
        Eigen::VectorXd gc;
        Eigen::MatrixXd Jc;
        for (iters = 0; iters < config.max_newton_iters; ++iters) {
            edge_constraints(result, edges, len2, gc, &Jc);
            if (gc.lpNorm<Eigen::Infinity>() <= conv_tol) return true;
            Eigen::MatrixXd A(m + 6, n3);
            A << Jc, gauge.rows;
            Eigen::VectorXd rhs(m + 6);
            rhs << -gc, Eigen::VectorXd::Zero(6);
            const Eigen::VectorXd dx = fixed_rank
                                           ? pinv_apply_fixed_rank(A, rhs, rank0)
                                           : pinv_apply_rel(A, rhs, config.rank_tol);
            for (int i = 0; i < static_cast<int>(result.size()); ++i)
                result[i] += dx.segment<3>(3 * i);
        }
        edge_constraints(result, edges, len2, gc, nullptr);
        return gc.lpNorm<Eigen::Infinity>() <= conv_tol;
    };

    double t_acc = 0.0;
    for (int step = 0; step < config.steps; ++step) {
        edge_constraints(pos, edges, len2, g, &J);
        Eigen::MatrixXd A(m + 6, n3);
        A << J, gauge.rows;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
        const Eigen::MatrixXd kernel = svd.matrixV().rightCols(corank);

        Eigen::VectorXd tan;
        if (prev_tan.size() == 0) {
            tan = kernel.col(0);
            int imax = 0;
            tan.cwiseAbs().maxCoeff(&imax);
            if (tan(imax) < 0.0) tan = -tan;
        } else {
            const Eigen::VectorXd dots = kernel.transpose() * prev_tan;
            int kbest = 0;
            dots.cwiseAbs().maxCoeff(&kbest);
            tan = kernel.col(kbest) * (dots(kbest) < 0.0 ? -1.0 : 1.0);
        }

        bool accepted = false;
        std::vector<Vec3> next;
        int used_iters = 0;
        double drift = 0.0;

        for (int phase = 0; phase < 2 && !accepted; ++phase) {
            const bool fixed_rank = (phase == 0);
            double h_eff = config.step_size;
            for (int halve = 0; halve <= config.max_halvings && !accepted; ++halve, h_eff *= 0.5) {
                std::vector<Vec3> predicted = pos;
                for (int i = 0; i < static_cast<int>(predicted.size()); ++i)
                    predicted[i] += (h_eff * diam) * tan.segment<3>(3 * i);
                std::vector<Vec3> corrected;
                int iters = 0;
                if (!run_corrector(predicted, fixed_rank, corrected, iters)) continue;

                double corr2 = 0.0, disp2 = 0.0, dot = 0.0;
                for (int i = 0; i < static_cast<int>(corrected.size()); ++i) {
                    corr2 += (corrected[i] - predicted[i]).squaredNorm();
                    const Vec3 di = corrected[i] - pos[i];
                    disp2 += di.squaredNorm();
                    dot += di.dot(tan.segment<3>(3 * i));
                }
                if (dot <= 0.0) continue;
                if (fixed_rank && std::sqrt(corr2) > 0.5 * h_eff * diam) continue;
                if (!fixed_rank && std::sqrt(disp2) > h_eff * diam) continue;
                const double d = max_rel_drift(corrected, edges, len0);
                if (d > config.drift_gate) continue;
                try {
                    out.frames.push_back(Mesh::build(corrected, mesh.faces()));
                } catch (const Error&) {
                    continue;
                }
                next = std::move(corrected);
                used_iters = iters;
                drift = d;
                accepted = true;
            }
        }
        if (!accepted) {
            std::ostringstream os;
            os << "corrector failed at step " << step << " after " << config.max_halvings
               << " halvings in both passes";
            throw Error(ErrorCode::NewtonDivergence, os.str());
        }

        Eigen::VectorXd disp(n3);
        for (int i = 0; i < static_cast<int>(next.size()); ++i)
            disp.segment<3>(3 * i) = next[i] - pos[i];
        t_acc += disp.norm() / diam;
        prev_tan = disp.normalized();
        pos = std::move(next);

        const Mesh& frame = out.frames.back();
        TraceRow row;
        row.step = step;
        row.t = t_acc;
        row.total_mean_curvature = frame.total_mean_curvature();
        row.oriented_volume = frame.oriented_volume();
        row.max_edge_drift = drift;
        row.newton_iters = used_iters;
        out.report.rows.push_back(row);
    }
    return out;
}

TraceReport resample_invariants(const std::vector<Mesh>& frames) {
    if (frames.empty()) throw Error(ErrorCode::InvalidParameter, "empty trace");
    TraceReport rep;
    rep.initial = frames.front().metric_summary();
    const Mesh& first = frames.front();
    const double diam = first.diameter();
    Eigen::VectorXd len0(first.edge_count());
    for (int k = 0; k < first.edge_count(); ++k) len0(k) = first.edges()[k].length;

    double t_acc = 0.0;
    for (size_t k = 0; k < frames.size(); ++k) {
        if (k > 0) {
            double d2 = 0.0;
            for (int i = 0; i < first.vertex_count(); ++i)
                d2 += (frames[k].vertices()[i] - frames[k - 1].vertices()[i]).squaredNorm();
            t_acc += std::sqrt(d2) / diam;
        }
        TraceRow row;
        row.step = static_cast<int>(k) - 1;
        row.t = t_acc;
        row.total_mean_curvature = frames[k].total_mean_curvature();
        row.oriented_volume = frames[k].oriented_volume();
        row.max_edge_drift = k == 0 ? 0.0 : max_rel_drift(frames[k].vertices(), first.edges(), len0);
        row.newton_iters = 0;
        rep.rows.push_back(row);
    }
    return rep;
}

void write_trace_csv(const TraceReport& report, const std::string& path) {
    std::ofstream outf(path);
    if (!outf) throw Error(ErrorCode::IoError, "cannot write " + path);
    outf << "step,t,M,V,max_edge_drift,newton_iters\n";
    char buf[256];
    for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%d\n", r.step, r.t,
                      r.total_mean_curvature, r.oriented_volume, r.max_edge_drift,
                      r.newton_iters);
        outf << buf;
    }
    if (!outf) throw Error(ErrorCode::IoError, "write failed for " + path);
}

void write_trace_frames_obj(const std::vector<Mesh>& frames, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create directory " + dir);
    char name[64];
    for (size_t k = 0; k < frames.size(); ++k) {
        std::snprintf(name, sizeof name, "frame_%04zu.obj", k);
        save_mesh_obj(frames[k], (std::filesystem::path(dir) / name).string());
    }
}

}  // namespace polyflex
