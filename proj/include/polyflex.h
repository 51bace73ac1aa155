/* polyflex — rigidity workbench for closed oriented triangulated polyhedra.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed through these functions; every fallible call returns a
 * pf_status and leaves a human-readable message in pf_last_error() (stored
 * per thread). Output parameters are written only on PF_OK.
 */
#ifndef POLYFLEX_H
#define POLYFLEX_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pf_status {
    PF_OK = 0,
    /* input and validation failures (CLI exit class 1) */
    PF_ERR_NON_MANIFOLD_EDGE = 100,
    PF_ERR_INCONSISTENT_ORIENTATION = 101,
    PF_ERR_DEGENERATE_FACE = 102,
    PF_ERR_INDEX_OUT_OF_RANGE = 103,
    PF_ERR_PARSE = 104,
    PF_ERR_UNSUPPORTED_FACE = 105,
    PF_ERR_INVALID_BARYCENTRIC = 106,
    PF_ERR_INVALID_SUBDIVISION = 107,
    PF_ERR_DEGENERATE_VERTEX_SET = 108,
    PF_ERR_NOT_REALIZABLE = 109,
    PF_ERR_IO = 110,
    /* numerical failures (CLI exit class 2) */
    PF_ERR_RANK_GAP_AMBIGUOUS = 200,
    PF_ERR_NO_FLEX_DIRECTION = 201,
    PF_ERR_NEWTON_DIVERGENCE = 202,
    PF_ERR_GAUGE_CONFLICT = 203,
    PF_ERR_EXTENSION_INCONSISTENT = 204,
    PF_ERR_UNDERDETERMINED_EXTENSION = 205,
    PF_ERR_COPLANAR_APEX = 206,
    PF_ERR_PREDICATE_FAILURE_EXHAUSTED = 207,
    /* argument failures (CLI exit class 3) */
    PF_ERR_INVALID_PARAMETER = 300,
    /* anything else */
    PF_ERR_INTERNAL = 500
} pf_status;

/* 0 for PF_OK, otherwise 1 (validation), 2 (numerical) or 3 (arguments). */
int pf_exit_class(pf_status status);
const char* pf_status_name(pf_status status);

/* Message from the most recent failing call on this thread ("" if none). */
const char* pf_last_error(void);

typedef struct pf_mesh pf_mesh;
typedef struct pf_field pf_field;
typedef struct pf_flex_basis pf_flex_basis;
typedef struct pf_trace pf_trace;

/* --- mesh ---------------------------------------------------------------- */

/* xyz: 3*nv doubles; tris: 3*nf zero-based indices. Validates that the faces
 * form a closed, consistently oriented triangulated surface with
 * nondegenerate faces. */
pf_status pf_mesh_create(const double* xyz, int32_t nv, const int32_t* tris, int32_t nf,
                         pf_mesh** out);
void pf_mesh_free(pf_mesh* mesh);

/* JSON schema: {"vertices": [[x,y,z], ...], "faces": [[i,j,k], ...]}.
 * OBJ: "v x y z" / "f i j k" (one-based), triangles only. */
pf_status pf_mesh_load_json(const char* path, pf_mesh** out);
pf_status pf_mesh_save_json(const pf_mesh* mesh, const char* path);
pf_status pf_mesh_load_obj(const char* path, pf_mesh** out);
pf_status pf_mesh_save_obj(const pf_mesh* mesh, const char* path);

int32_t pf_mesh_vertex_count(const pf_mesh* mesh);
int32_t pf_mesh_edge_count(const pf_mesh* mesh);
int32_t pf_mesh_face_count(const pf_mesh* mesh);
int32_t pf_mesh_euler_characteristic(const pf_mesh* mesh);
double pf_mesh_diameter(const pf_mesh* mesh);
/* copies 3*vertex_count doubles / 3*face_count indices into caller storage */
void pf_mesh_vertices(const pf_mesh* mesh, double* xyz);
void pf_mesh_faces(const pf_mesh* mesh, int32_t* tris);

pf_status pf_mesh_total_mean_curvature(const pf_mesh* mesh, double* out);
pf_status pf_mesh_oriented_volume(const pf_mesh* mesh, double* out);
/* interior dihedral angle in (0, 2*pi) at the edge {i, j} */
pf_status pf_mesh_dihedral_angle(const pf_mesh* mesh, int32_t i, int32_t j, double* out);
/* 1 if all faces around v fit a common plane within tol */
pf_status pf_mesh_vertex_star_coplanar(const pf_mesh* mesh, int32_t v, double tol, int32_t* out);
/* 1 if some three unit edge directions at v have |triple product| < tol */
pf_status pf_mesh_three_incident_edges_coplanar(const pf_mesh* mesh, int32_t v, double tol,
                                                int32_t* out);
/* replaces a face by three triangles around its interior barycentric point */
pf_status pf_mesh_subdivide_face(const pf_mesh* mesh, int32_t face, const double bary[3],
                                 pf_mesh** out);

/* |volume| of the tetrahedron with edge lengths (d01,d02,d03,d12,d13,d23);
 * PF_ERR_NOT_REALIZABLE when no such tetrahedron exists. */
pf_status pf_cayley_menger_volume(const double lengths[6], double* out);

/* --- vertex fields -------------------------------------------------------- */

pf_status pf_field_create(const double* xyz, int32_t nv, pf_field** out);
void pf_field_free(pf_field* field);
int32_t pf_field_size(const pf_field* field);
void pf_field_values(const pf_field* field, double* xyz);
/* JSON schema: {"field": [[x,y,z], ...]} aligned with the mesh vertex order */
pf_status pf_field_load_json(const char* path, pf_field** out);
pf_status pf_field_save_json(const pf_field* field, const char* path);

/* --- rigidity ------------------------------------------------------------- */

/* Writes six orthonormal first-order rigid motions into fields[0..5]. */
pf_status pf_trivial_motion_basis(const pf_mesh* mesh, pf_field* fields[6]);

/* Orthonormal basis of the nontrivial infinitesimal-flex space (kernel of
 * the rigidity matrix modulo the six rigid motions). rank_tol <= 0 selects
 * the default 1e-8. */
pf_status pf_flex_space(const pf_mesh* mesh, double rank_tol, pf_flex_basis** out);
void pf_flex_basis_free(pf_flex_basis* basis);
int32_t pf_flex_basis_dimension(const pf_flex_basis* basis);
pf_status pf_flex_basis_field(const pf_flex_basis* basis, int32_t k, pf_field** out);
int32_t pf_flex_basis_singular_value_count(const pf_flex_basis* basis);
void pf_flex_basis_singular_values(const pf_flex_basis* basis, double* out);

/* surface integral of the normal component of the interpolated field */
pf_status pf_flux(const pf_mesh* mesh, const pf_field* field, double* out);
/* first-order rate of change of oriented volume under the field */
pf_status pf_volume_derivative(const pf_mesh* mesh, const pf_field* field, double* out);
/* central difference of total mean curvature along the field; h <= 0 picks
 * a balanced default step */
pf_status pf_tmc_directional_derivative(const pf_mesh* mesh, const pf_field* field, double h,
                                        double* out);
/* least-squares extension of a partially known field to a full
 * infinitesimal flex; known_idx/known_xyz hold n_known prescribed vertices */
pf_status pf_extend_field(const pf_mesh* mesh, const int32_t* known_idx,
                          const double* known_xyz, int32_t n_known, pf_field** out);

/* --- constructions --------------------------------------------------------- */

/* tetra_xyz: vertices A,B,C,D as 12 doubles; bary: interior point of face
 * ABC; s: magnitude of the flex at the new vertex. Outputs the subdivided
 * tetrahedron (5 vertices) and its infinitesimal flex. */
pf_status pf_build_t1(const double tetra_xyz[12], const double bary[3], double s,
                      pf_mesh** mesh_out, pf_field** field_out);
/* T1 with face ACV replaced by the pyramid over apex (6 vertices). */
pf_status pf_build_t2(const double tetra_xyz[12], const double bary[3], double s,
                      const double apex[3], pf_mesh** mesh_out, pf_field** field_out);
/* flexible line-symmetric octahedron from seed points a, b, v */
pf_status pf_bricard_type1(const double a[3], const double b[3], const double v[3],
                           pf_mesh** out);
/* deterministic seed table; writes a, b, v */
void pf_bricard_seed_preset(int32_t k, double a[3], double b[3], double v[3]);

/* params_json (all fields optional): {"tetra":[[x,y,z]x4],
 * "v_barycentric":[w0,w1,w2], "apex":[x,y,z], "flex_magnitude":s,
 * "axis_angles":[...], "coplanar_tol_rel":t}. report_json (optional out)
 * receives the construction report; free with pf_string_free. */
pf_status pf_build_counterexample(const char* params_json, pf_mesh** mesh_out,
                                  pf_field** field_out, char** report_json);

/* params_json: {"l":..., "bd_points":[...], "abd_points":[[w,w,w]...],
 * "bcd_points":[[w,w,w]...]} — only "l" is required. */
pf_status pf_delta_k_mesh(const char* params_json, pf_mesh** out);
/* closed forms M(l), phi(l), psi(l) plus the alternative phi variant */
pf_status pf_delta_k_closed_form(double l, double* total_mean_curvature, double* phi,
                                 double* psi, double* phi_alt);

/* --- flex tracing ----------------------------------------------------------- */

/* config_json (all fields optional): {"steps":n, "step_size":h,
 * "newton_tol":..., "max_newton_iters":n, "rank_tol":..., "drift_gate":...,
 * "max_halvings":n, "gauge_face":f}. */
pf_status pf_trace_flex(const pf_mesh* mesh, const char* config_json, pf_trace** out);
void pf_trace_free(pf_trace* trace);
int32_t pf_trace_step_count(const pf_trace* trace);
/* 6 doubles per step: step, t, M, V, max_edge_drift, newton_iters */
void pf_trace_rows(const pf_trace* trace, double* rows);
/* frame 0 is the input mesh; valid k range is [0, step_count] */
pf_status pf_trace_frame(const pf_trace* trace, int32_t k, pf_mesh** out);
/* recomputes t, M, V and drift per frame from the stored geometry alone;
 * rows holds 6 doubles per frame, step_count + 1 frames in total */
pf_status pf_trace_resample(const pf_trace* trace, double* rows);
pf_status pf_trace_save_csv(const pf_trace* trace, const char* path);
pf_status pf_trace_save_frames_obj(const pf_trace* trace, const char* dir);

/* --- reports ----------------------------------------------------------------- */

/* JSON report: counts, metrics, flex space, flux per basis field, both
 * coplanarity predicates per vertex. rank_tol/coplanar_tol_rel <= 0 select
 * defaults (1e-8 and 1e-9). Free with pf_string_free. */
pf_status pf_analyze(const pf_mesh* mesh, double rank_tol, double coplanar_tol_rel,
                     char** report_json);

void pf_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* POLYFLEX_H */
