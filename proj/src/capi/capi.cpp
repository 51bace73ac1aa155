#include "polyflex.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "core/analyze.hpp"
#include "core/constructions.hpp"
#include "core/error.hpp"
#include "core/flexpath.hpp"
#include "core/mesh.hpp"
#include "core/mesh_io.hpp"
#include "core/rigidity.hpp"

using namespace polyflex;

struct pf_mesh {
    Mesh m;
};
struct pf_field {
    VertexField w;
};
struct pf_flex_basis {
    FlexBasis fb;
};
struct pf_trace {
    TraceResult tr;
};

namespace {

thread_local std::string g_last_error;

pf_status status_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonManifoldEdge: return PF_ERR_NON_MANIFOLD_EDGE;
        case ErrorCode::InconsistentOrientation: return PF_ERR_INCONSISTENT_ORIENTATION;
        case ErrorCode::DegenerateFace: return PF_ERR_DEGENERATE_FACE;
        case ErrorCode::IndexOutOfRange: return PF_ERR_INDEX_OUT_OF_RANGE;
        case ErrorCode::ParseError: return PF_ERR_PARSE;
        case ErrorCode::UnsupportedFace: return PF_ERR_UNSUPPORTED_FACE;
        case ErrorCode::InvalidBarycentric: return PF_ERR_INVALID_BARYCENTRIC;
        case ErrorCode::InvalidSubdivision: return PF_ERR_INVALID_SUBDIVISION;
        case ErrorCode::DegenerateVertexSet: return PF_ERR_DEGENERATE_VERTEX_SET;
        case ErrorCode::NotRealizable: return PF_ERR_NOT_REALIZABLE;
        case ErrorCode::IoError: return PF_ERR_IO;
        case ErrorCode::RankGapAmbiguous: return PF_ERR_RANK_GAP_AMBIGUOUS;
        case ErrorCode::NoFlexDirection: return PF_ERR_NO_FLEX_DIRECTION;
        case ErrorCode::NewtonDivergence: return PF_ERR_NEWTON_DIVERGENCE;
        case ErrorCode::GaugeConflict: return PF_ERR_GAUGE_CONFLICT;
        case ErrorCode::ExtensionInconsistent: return PF_ERR_EXTENSION_INCONSISTENT;
        case ErrorCode::UnderdeterminedExtension: return PF_ERR_UNDERDETERMINED_EXTENSION;
        case ErrorCode::CoplanarApex: return PF_ERR_COPLANAR_APEX;
        case ErrorCode::PredicateFailureExhausted: return PF_ERR_PREDICATE_FAILURE_EXHAUSTED;
        case ErrorCode::InvalidParameter: return PF_ERR_INVALID_PARAMETER;
    }
    return PF_ERR_INTERNAL;
}

template <class Fn>
pf_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return PF_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PF_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

nlohmann::json parse_or_empty(const char* text, const char* what) {
    if (!text || !*text) return nlohmann::json::object();
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw Error(ErrorCode::ParseError, std::string(what) + ": malformed JSON object");
    return j;
}

Vec3 vec3_of(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        throw Error(ErrorCode::ParseError, std::string(what) + ": expected [x,y,z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

CounterexampleParams counterexample_params_of(const nlohmann::json& j) {
    CounterexampleParams p;
    if (j.contains("tetra")) {
        const auto& t = j["tetra"];
        if (!t.is_array() || t.size() != 4)
            throw Error(ErrorCode::ParseError, "tetra: expected four points");
        for (int i = 0; i < 4; ++i) p.tetra[i] = vec3_of(t[i], "tetra");
    }
    if (j.contains("v_barycentric")) {
        const auto& b = j["v_barycentric"];
        if (!b.is_array() || b.size() != 3)
            throw Error(ErrorCode::ParseError, "v_barycentric: expected three weights");
        for (int i = 0; i < 3; ++i) p.v_barycentric[i] = b[i].get<double>();
    }
    if (j.contains("apex")) p.apex = vec3_of(j["apex"], "apex");
    if (j.contains("flex_magnitude")) p.flex_magnitude = j["flex_magnitude"].get<double>();
    if (j.contains("axis_angles")) {
        p.axis_angles.clear();
        for (const auto& a : j["axis_angles"]) p.axis_angles.push_back(a.get<double>());
    }
    if (j.contains("coplanar_tol_rel")) p.coplanar_tol_rel = j["coplanar_tol_rel"].get<double>();
    return p;
}

DeltaKParams delta_k_params_of(const nlohmann::json& j) {
    DeltaKParams p;
    if (!j.contains("l")) throw Error(ErrorCode::ParseError, "delta-k params: missing \"l\"");
    p.l = j["l"].get<double>();
    if (j.contains("bd_points"))
        for (const auto& t : j["bd_points"]) p.bd_points.push_back(t.get<double>());
    const auto read_pts = [&](const char* key, std::vector<std::array<double, 3>>& dst) {
        if (!j.contains(key)) return;
        for (const auto& w : j[key]) {
            if (!w.is_array() || w.size() != 3)
                throw Error(ErrorCode::ParseError,
                            std::string(key) + ": expected barycentric triples");
            dst.push_back({w[0].get<double>(), w[1].get<double>(), w[2].get<double>()});
        }
    };
    read_pts("abd_points", p.abd_points);
    read_pts("bcd_points", p.bcd_points);
    return p;
}

TraceConfig trace_config_of(const nlohmann::json& j) {
    TraceConfig c;
    if (j.contains("steps")) c.steps = j["steps"].get<int>();
    if (j.contains("step_size")) c.step_size = j["step_size"].get<double>();
    if (j.contains("newton_tol")) c.newton_tol = j["newton_tol"].get<double>();
    if (j.contains("max_newton_iters")) c.max_newton_iters = j["max_newton_iters"].get<int>();
    if (j.contains("rank_tol")) c.rank_tol = j["rank_tol"].get<double>();
    if (j.contains("drift_gate")) c.drift_gate = j["drift_gate"].get<double>();
    if (j.contains("max_halvings")) c.max_halvings = j["max_halvings"].get<int>();
    if (j.contains("gauge_face")) c.gauge_face = j["gauge_face"].get<int>();
    return c;
}

}  // namespace

extern "C" {

int pf_exit_class(pf_status status) {
    if (status == PF_OK) return 0;
    if (status >= 500) return 2;  // unexpected runtime failures
    if (status >= 300) return 3;
    if (status >= 200) return 2;
    return 1;
}

const char* pf_status_name(pf_status status) {
    switch (status) {
        case PF_OK: return "OK";
        case PF_ERR_NON_MANIFOLD_EDGE: return "NonManifoldEdge";
        case PF_ERR_INCONSISTENT_ORIENTATION: return "InconsistentOrientation";
        case PF_ERR_DEGENERATE_FACE: return "DegenerateFace";
        case PF_ERR_INDEX_OUT_OF_RANGE: return "IndexOutOfRange";
        case PF_ERR_PARSE: return "ParseError";
        case PF_ERR_UNSUPPORTED_FACE: return "UnsupportedFace";
        case PF_ERR_INVALID_BARYCENTRIC: return "InvalidBarycentric";
        case PF_ERR_INVALID_SUBDIVISION: return "InvalidSubdivision";
        case PF_ERR_DEGENERATE_VERTEX_SET: return "DegenerateVertexSet";
        case PF_ERR_NOT_REALIZABLE: return "NotRealizable";
        case PF_ERR_IO: return "IoError";
        case PF_ERR_RANK_GAP_AMBIGUOUS: return "RankGapAmbiguous";
        case PF_ERR_NO_FLEX_DIRECTION: return "NoFlexDirection";
        case PF_ERR_NEWTON_DIVERGENCE: return "NewtonDivergence";
        case PF_ERR_GAUGE_CONFLICT: return "GaugeConflict";
        case PF_ERR_EXTENSION_INCONSISTENT: return "ExtensionInconsistent";
        case PF_ERR_UNDERDETERMINED_EXTENSION: return "UnderdeterminedExtension";
        case PF_ERR_COPLANAR_APEX: return "CoplanarApex";
        case PF_ERR_PREDICATE_FAILURE_EXHAUSTED: return "PredicateFailureExhausted";
        case PF_ERR_INVALID_PARAMETER: return "InvalidParameter";
        case PF_ERR_INTERNAL: return "InternalError";
    }
    return "UnknownStatus";
}

const char* pf_last_error(void) { return g_last_error.c_str(); }

pf_status pf_mesh_create(const double* xyz, int32_t nv, const int32_t* tris, int32_t nf,
                         pf_mesh** out) {
    return guarded([&] {
        if (!xyz || !tris || !out || nv < 0 || nf < 0)
            throw Error(ErrorCode::InvalidParameter, "null argument");
        std::vector<Vec3> verts(nv);
        for (int32_t i = 0; i < nv; ++i) verts[i] = Vec3(xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]);
        std::vector<std::array<int, 3>> faces(nf);
        for (int32_t i = 0; i < nf; ++i)
            faces[i] = {tris[3 * i], tris[3 * i + 1], tris[3 * i + 2]};
        *out = new pf_mesh{Mesh::build(std::move(verts), std::move(faces))};
    });
}

void pf_mesh_free(pf_mesh* mesh) { delete mesh; }

pf_status pf_mesh_load_json(const char* path, pf_mesh** out) {
    return guarded([&] { *out = new pf_mesh{load_mesh_json(path)}; });
}
pf_status pf_mesh_save_json(const pf_mesh* mesh, const char* path) {
    return guarded([&] { save_mesh_json(mesh->m, path); });
}
pf_status pf_mesh_load_obj(const char* path, pf_mesh** out) {
    return guarded([&] { *out = new pf_mesh{load_mesh_obj(path)}; });
}
pf_status pf_mesh_save_obj(const pf_mesh* mesh, const char* path) {
    return guarded([&] { save_mesh_obj(mesh->m, path); });
}

int32_t pf_mesh_vertex_count(const pf_mesh* mesh) { return mesh->m.vertex_count(); }
int32_t pf_mesh_edge_count(const pf_mesh* mesh) { return mesh->m.edge_count(); }
int32_t pf_mesh_face_count(const pf_mesh* mesh) { return mesh->m.face_count(); }
int32_t pf_mesh_euler_characteristic(const pf_mesh* mesh) {
    return mesh->m.euler_characteristic();
}
double pf_mesh_diameter(const pf_mesh* mesh) { return mesh->m.diameter(); }

void pf_mesh_vertices(const pf_mesh* mesh, double* xyz) {
    for (int i = 0; i < mesh->m.vertex_count(); ++i) {
        const Vec3& p = mesh->m.vertices()[i];
        xyz[3 * i] = p.x();
        xyz[3 * i + 1] = p.y();
        xyz[3 * i + 2] = p.z();
    }
}

void pf_mesh_faces(const pf_mesh* mesh, int32_t* tris) {
    for (int i = 0; i < mesh->m.face_count(); ++i)
        for (int k = 0; k < 3; ++k) tris[3 * i + k] = mesh->m.faces()[i][k];
}

pf_status pf_mesh_total_mean_curvature(const pf_mesh* mesh, double* out) {
    return guarded([&] { *out = mesh->m.total_mean_curvature(); });
}
pf_status pf_mesh_oriented_volume(const pf_mesh* mesh, double* out) {
    return guarded([&] { *out = mesh->m.oriented_volume(); });
}
pf_status pf_mesh_dihedral_angle(const pf_mesh* mesh, int32_t i, int32_t j, double* out) {
    return guarded([&] { *out = mesh->m.dihedral_angle(i, j); });
}
pf_status pf_mesh_vertex_star_coplanar(const pf_mesh* mesh, int32_t v, double tol,
                                       int32_t* out) {
    return guarded([&] { *out = mesh->m.vertex_star_coplanar(v, tol) ? 1 : 0; });
}
pf_status pf_mesh_three_incident_edges_coplanar(const pf_mesh* mesh, int32_t v, double tol,
                                                int32_t* out) {
    return guarded([&] { *out = mesh->m.three_incident_edges_coplanar(v, tol) ? 1 : 0; });
}
pf_status pf_mesh_subdivide_face(const pf_mesh* mesh, int32_t face, const double bary[3],
                                 pf_mesh** out) {
    return guarded([&] {
        *out = new pf_mesh{mesh->m.subdivide_face(face, {bary[0], bary[1], bary[2]})};
    });
}

pf_status pf_cayley_menger_volume(const double lengths[6], double* out) {
    return guarded([&] {
        *out = cayley_menger_volume(
            {lengths[0], lengths[1], lengths[2], lengths[3], lengths[4], lengths[5]});
    });
}

pf_status pf_field_create(const double* xyz, int32_t nv, pf_field** out) {
    return guarded([&] {
        if (!xyz || nv < 0) throw Error(ErrorCode::InvalidParameter, "null argument");
        VertexField w(nv);
        for (int32_t i = 0; i < nv; ++i) w[i] = Vec3(xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]);
        *out = new pf_field{std::move(w)};
    });
}
void pf_field_free(pf_field* field) { delete field; }
int32_t pf_field_size(const pf_field* field) { return static_cast<int32_t>(field->w.size()); }
void pf_field_values(const pf_field* field, double* xyz) {
    for (size_t i = 0; i < field->w.size(); ++i) {
        xyz[3 * i] = field->w[i].x();
        xyz[3 * i + 1] = field->w[i].y();
        xyz[3 * i + 2] = field->w[i].z();
    }
}
pf_status pf_field_load_json(const char* path, pf_field** out) {
    return guarded([&] { *out = new pf_field{load_field_json(path)}; });
}
pf_status pf_field_save_json(const pf_field* field, const char* path) {
    return guarded([&] { save_field_json(field->w, path); });
}

pf_status pf_trivial_motion_basis(const pf_mesh* mesh, pf_field* fields[6]) {
    return guarded([&] {
        auto basis = trivial_motion_basis(mesh->m);
        for (int k = 0; k < 6; ++k) fields[k] = new pf_field{std::move(basis[k])};
    });
}

pf_status pf_flex_space(const pf_mesh* mesh, double rank_tol, pf_flex_basis** out) {
    return guarded([&] {
        *out = new pf_flex_basis{
            flex_space(mesh->m, rank_tol > 0 ? rank_tol : kDefaultRankTol)};
    });
}
void pf_flex_basis_free(pf_flex_basis* basis) { delete basis; }
int32_t pf_flex_basis_dimension(const pf_flex_basis* basis) { return basis->fb.dimension(); }
pf_status pf_flex_basis_field(const pf_flex_basis* basis, int32_t k, pf_field** out) {
    return guarded([&] {
        if (k < 0 || k >= basis->fb.dimension())
            throw Error(ErrorCode::IndexOutOfRange, "basis index out of range");
        *out = new pf_field{basis->fb.basis[k]};
    });
}
int32_t pf_flex_basis_singular_value_count(const pf_flex_basis* basis) {
    return static_cast<int32_t>(basis->fb.singular_values.size());
}
void pf_flex_basis_singular_values(const pf_flex_basis* basis, double* out) {
    for (int i = 0; i < basis->fb.singular_values.size(); ++i)
        out[i] = basis->fb.singular_values(i);
}

pf_status pf_flux(const pf_mesh* mesh, const pf_field* field, double* out) {
    return guarded([&] { *out = flux(mesh->m, field->w); });
}
pf_status pf_volume_derivative(const pf_mesh* mesh, const pf_field* field, double* out) {
    return guarded([&] { *out = volume_derivative(mesh->m, field->w); });
}
pf_status pf_tmc_directional_derivative(const pf_mesh* mesh, const pf_field* field, double h,
                                        double* out) {
    return guarded([&] {
        const double step = h > 0 ? h : default_fd_step(mesh->m, field->w);
        *out = tmc_directional_derivative(mesh->m, field->w, step);
    });
}
pf_status pf_extend_field(const pf_mesh* mesh, const int32_t* known_idx,
                          const double* known_xyz, int32_t n_known, pf_field** out) {
    return guarded([&] {
        std::map<int, Vec3> known;
        for (int32_t k = 0; k < n_known; ++k)
            known[known_idx[k]] =
                Vec3(known_xyz[3 * k], known_xyz[3 * k + 1], known_xyz[3 * k + 2]);
        *out = new pf_field{extend_field(mesh->m, known)};
    });
}

pf_status pf_build_t1(const double tetra_xyz[12], const double bary[3], double s,
                      pf_mesh** mesh_out, pf_field** field_out) {
    return guarded([&] {
        std::array<Vec3, 4> tetra;
        for (int i = 0; i < 4; ++i)
            tetra[i] = Vec3(tetra_xyz[3 * i], tetra_xyz[3 * i + 1], tetra_xyz[3 * i + 2]);
        T1 t1 = build_t1(tetra, {bary[0], bary[1], bary[2]}, s);
        *mesh_out = new pf_mesh{std::move(t1.mesh)};
        *field_out = new pf_field{std::move(t1.field)};
    });
}

pf_status pf_build_t2(const double tetra_xyz[12], const double bary[3], double s,
                      const double apex[3], pf_mesh** mesh_out, pf_field** field_out) {
    return guarded([&] {
        std::array<Vec3, 4> tetra;
        for (int i = 0; i < 4; ++i)
            tetra[i] = Vec3(tetra_xyz[3 * i], tetra_xyz[3 * i + 1], tetra_xyz[3 * i + 2]);
        T2 t2 = build_t2(tetra, {bary[0], bary[1], bary[2]}, s,
                         Vec3(apex[0], apex[1], apex[2]));
        *mesh_out = new pf_mesh{std::move(t2.mesh)};
        *field_out = new pf_field{std::move(t2.field)};
    });
}

pf_status pf_bricard_type1(const double a[3], const double b[3], const double v[3],
                           pf_mesh** out) {
    return guarded([&] {
        BricardSeed seed{Vec3(a[0], a[1], a[2]), Vec3(b[0], b[1], b[2]),
                         Vec3(v[0], v[1], v[2])};
        *out = new pf_mesh{bricard_type1(seed)};
    });
}

void pf_bricard_seed_preset(int32_t k, double a[3], double b[3], double v[3]) {
    const BricardSeed seed = bricard_seed_preset(k >= 0 ? k : 0);
    for (int i = 0; i < 3; ++i) {
        a[i] = seed.a(i);
        b[i] = seed.b(i);
        v[i] = seed.v(i);
    }
}

pf_status pf_build_counterexample(const char* params_json, pf_mesh** mesh_out,
                                  pf_field** field_out, char** report_json) {
    return guarded([&] {
        const CounterexampleParams params =
            counterexample_params_of(parse_or_empty(params_json, "counterexample params"));
        CounterexampleResult res = build_counterexample(params);
        if (report_json) *report_json = dup_string(counterexample_report_json(res, kDefaultRankTol));
        if (mesh_out) *mesh_out = new pf_mesh{std::move(res.mesh)};
        if (field_out) *field_out = new pf_field{std::move(res.field)};
    });
}

pf_status pf_delta_k_mesh(const char* params_json, pf_mesh** out) {
    return guarded([&] {
        nlohmann::json j = parse_or_empty(params_json, "delta-k params");
        *out = new pf_mesh{delta_k_mesh(delta_k_params_of(j))};
    });
}

pf_status pf_delta_k_closed_form(double l, double* total_mean_curvature, double* phi,
                                 double* psi, double* phi_alt) {
    return guarded([&] {
        const DeltaKClosedForm cf = delta_k_closed_form(l);
        if (total_mean_curvature) *total_mean_curvature = cf.total_mean_curvature;
        if (phi) *phi = cf.phi;
        if (psi) *psi = cf.psi;
        if (phi_alt) *phi_alt = cf.phi_alt;
    });
}

pf_status pf_trace_flex(const pf_mesh* mesh, const char* config_json, pf_trace** out) {
    return guarded([&] {
        const TraceConfig config = trace_config_of(parse_or_empty(config_json, "trace config"));
        *out = new pf_trace{trace_flex(mesh->m, config)};
    });
}
void pf_trace_free(pf_trace* trace) { delete trace; }
int32_t pf_trace_step_count(const pf_trace* trace) {
    return static_cast<int32_t>(trace->tr.report.rows.size());
}
void pf_trace_rows(const pf_trace* trace, double* rows) {
    for (size_t k = 0; k < trace->tr.report.rows.size(); ++k) {
        const TraceRow& r = trace->tr.report.rows[k];
        rows[6 * k] = r.step;
        rows[6 * k + 1] = r.t;
        rows[6 * k + 2] = r.total_mean_curvature;
        rows[6 * k + 3] = r.oriented_volume;
        rows[6 * k + 4] = r.max_edge_drift;
        rows[6 * k + 5] = r.newton_iters;
    }
}
pf_status pf_trace_frame(const pf_trace* trace, int32_t k, pf_mesh** out) {
    return guarded([&] {
        if (k < 0 || k >= static_cast<int32_t>(trace->tr.frames.size()))
            throw Error(ErrorCode::IndexOutOfRange, "frame index out of range");
        *out = new pf_mesh{trace->tr.frames[k]};
    });
}
pf_status pf_trace_resample(const pf_trace* trace, double* rows) {
    return guarded([&] {
        const TraceReport rep = resample_invariants(trace->tr.frames);
        for (size_t k = 0; k < rep.rows.size(); ++k) {
            const TraceRow& r = rep.rows[k];
            rows[6 * k] = r.step;
            rows[6 * k + 1] = r.t;
            rows[6 * k + 2] = r.total_mean_curvature;
            rows[6 * k + 3] = r.oriented_volume;
            rows[6 * k + 4] = r.max_edge_drift;
            rows[6 * k + 5] = r.newton_iters;
        }
    });
}

pf_status pf_trace_save_csv(const pf_trace* trace, const char* path) {
    return guarded([&] { write_trace_csv(trace->tr.report, path); });
}
pf_status pf_trace_save_frames_obj(const pf_trace* trace, const char* dir) {
    return guarded([&] { write_trace_frames_obj(trace->tr.frames, dir); });
}

pf_status pf_analyze(const pf_mesh* mesh, double rank_tol, double coplanar_tol_rel,
                     char** report_json) {
    return guarded([&] {
        AnalyzeOptions opts;
        if (rank_tol > 0) opts.rank_tol = rank_tol;
        if (coplanar_tol_rel > 0) opts.coplanar_tol_rel = coplanar_tol_rel;
        *report_json = dup_string(analyze_report_json(mesh->m, opts));
    });
}

void pf_string_free(char* text) { delete[] text; }

}  // extern "C"
