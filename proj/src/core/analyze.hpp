#pragma once

#include <string>

#include "core/constructions.hpp"
#include "core/mesh.hpp"

namespace polyflex {

struct AnalyzeOptions {
    double rank_tol = kDefaultRankTol;
    double coplanar_tol_rel = 1e-9;  // fraction of the mesh diameter
};

/// Counts, metrics, flex dimension with the singular spectrum, flux of each
/// nontrivial flex basis field, and both coplanarity predicates per vertex.
/// Deterministic field order; serialized with lossless doubles.
std::string analyze_report_json(const Mesh& mesh, const AnalyzeOptions& options);

std::string counterexample_report_json(const CounterexampleResult& result, double rank_tol);

}  // namespace polyflex
