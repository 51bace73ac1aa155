#pragma once

#include <string>
#include <vector>

#include "core/mesh.hpp"
#include "core/rigidity.hpp"

namespace polyflex {

struct TraceConfig {
    int steps = 100;
    double step_size = 0.01;     // predictor length as a fraction of the mesh diameter
    double newton_tol = 1e-12;   // corrector gate on |g|_inf, relative to diameter^2
    int max_newton_iters = 20;
    double rank_tol = kDefaultRankTol;
    double drift_gate = 1e-10;   // max relative edge-length drift per accepted step
    int max_halvings = 8;
    int gauge_face = 0;          // face whose vertices carry the 6 pinned coordinates
};

struct TraceRow {
    int step = 0;
    double t = 0.0;              // accumulated |displacement| / diameter
    double total_mean_curvature = 0.0;
    double oriented_volume = 0.0;
    double max_edge_drift = 0.0;
    int newton_iters = 0;
};

struct TraceReport {
    MetricSummary initial;
    std::vector<TraceRow> rows;
    int gauge_face_used = 0;
    bool gauge_repinned = false;
};

struct TraceResult {
    std::vector<Mesh> frames;    // frames[0] is the input mesh
    TraceReport report;
};

/// Predictor-corrector continuation along the edge-length constraint
/// manifold. The tangent is a unit kernel direction of the gauge-pinned
/// rigidity system, sign-matched to the previous step. The corrector is
/// Gauss-Newton with an SVD pseudoinverse truncated to the mechanism rank
/// detected at the start; when that stalls (first-order flexes that do not
/// integrate to a finite motion), a relaxation pass with a
/// relative-threshold pseudoinverse is tried before the step fails. Steps
/// are halved up to `max_halvings` times per pass.
TraceResult trace_flex(const Mesh& mesh, const TraceConfig& config);

/// Recomputes t, M, V and edge drift for every frame with mesh-core
/// operations only; one row per frame (frame 0 has t = 0, drift = 0).
TraceReport resample_invariants(const std::vector<Mesh>& frames);

/// Columns: step,t,M,V,max_edge_drift,newton_iters.
void write_trace_csv(const TraceReport& report, const std::string& path);

/// Writes frame_0000.obj, frame_0001.obj, ... into `dir` (created if needed).
void write_trace_frames_obj(const std::vector<Mesh>& frames, const std::string& dir);

}  // namespace polyflex
