#include "core/analyze.hpp"

#include <json.hpp>

#include "core/rigidity.hpp"

namespace polyflex {

using ordered_json = nlohmann::ordered_json;

std::string analyze_report_json(const Mesh& mesh, const AnalyzeOptions& options) {
    ordered_json j;
    j["counts"] = {{"vertices", mesh.vertex_count()},
                   {"edges", mesh.edge_count()},
                   {"faces", mesh.face_count()},
                   {"euler_characteristic", mesh.euler_characteristic()}};
    j["total_mean_curvature"] = mesh.total_mean_curvature();
    j["oriented_volume"] = mesh.oriented_volume();

    const FlexBasis fb = flex_space(mesh, options.rank_tol);
    ordered_json flex;
    flex["dimension"] = fb.dimension();
    flex["rank_tolerance"] = options.rank_tol;
    flex["singular_values"] = ordered_json::array();
    for (int i = 0; i < fb.singular_values.size(); ++i)
        flex["singular_values"].push_back(fb.singular_values(i));
    flex["flux_per_basis_field"] = ordered_json::array();
    for (const auto& w : fb.basis) flex["flux_per_basis_field"].push_back(flux(mesh, w));
    j["flex"] = std::move(flex);

    const double tol = options.coplanar_tol_rel * mesh.diameter();
    ordered_json pred;
    pred["tolerance"] = tol;
    pred["vertex_star_coplanar"] = ordered_json::array();
    pred["three_incident_edges_coplanar"] = ordered_json::array();
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        pred["vertex_star_coplanar"].push_back(mesh.vertex_star_coplanar(v, tol));
        pred["three_incident_edges_coplanar"].push_back(
            mesh.three_incident_edges_coplanar(v, tol));
    }
    j["predicates"] = std::move(pred);
    return j.dump(2) + "\n";
}

std::string counterexample_report_json(const CounterexampleResult& result, double rank_tol) {
    static const char* names[8] = {"A", "B", "C", "D", "V", "B1", "A1", "V1"};
    ordered_json j;
    j["counts"] = {{"vertices", result.mesh.vertex_count()},
                   {"edges", result.mesh.edge_count()},
                   {"faces", result.mesh.face_count()},
                   {"euler_characteristic", result.mesh.euler_characteristic()}};
    j["flux"] = result.flux_p;
    j["flux_t1"] = result.flux_t1;
    j["flux_t2"] = result.flux_t2;
    j["area_abc"] = result.area_abc;
    j["flex_dimension"] = flex_space(result.mesh, rank_tol).dimension();
    j["axis_index"] = result.axis_index;
    j["axis"] = {result.axis.x(), result.axis.y(), result.axis.z()};
    j["predicate_tolerance"] = result.predicate_tol;
    ordered_json table = ordered_json::array();
    for (int v = 0; v < 8; ++v) {
        ordered_json row;
        row["vertex"] = names[v];
        row["vertex_star_coplanar"] = result.star_coplanar[v];
        row["three_incident_edges_coplanar"] = result.edges_coplanar[v];
        table.push_back(std::move(row));
    }
    j["predicates"] = std::move(table);
    return j.dump(2) + "\n";
}

}  // namespace polyflex
