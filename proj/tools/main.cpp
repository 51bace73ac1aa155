// polyflex command-line tool. Links the shared library through its C
// interface only; all numerics live behind polyflex.h.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyflex.h"

namespace {

using nlohmann::json;

[[noreturn]] void fail(pf_status status) {
    // pf_last_error() already starts with the status name
    std::cerr << "polyflex: " << pf_last_error() << "\n";
    std::exit(pf_exit_class(status));
}

void check(pf_status status) {
    if (status != PF_OK) fail(status);
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

pf_mesh* load_mesh_any(const std::string& path) {
    pf_mesh* mesh = nullptr;
    check(ends_with(path, ".obj") ? pf_mesh_load_obj(path.c_str(), &mesh)
                                  : pf_mesh_load_json(path.c_str(), &mesh));
    return mesh;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) {
        std::cerr << "polyflex: cannot open config " << path << "\n";
        std::exit(3);
    }
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        std::cerr << "polyflex: config " << path << " is not a JSON object\n";
        std::exit(3);
    }
    return j;
}

template <class T>
void override_from(const json& cfg, const char* key, T& value) {
    if (cfg.contains(key)) value = cfg[key].get<T>();
}

std::vector<double> parse_l_values(const std::string& expr) {
    std::vector<double> out;
    if (expr.find(':') != std::string::npos) {
        double lo, step, hi;
        char c1, c2;
        std::istringstream ss(expr);
        if (!(ss >> lo >> c1 >> step >> c2 >> hi) || c1 != ':' || c2 != ':' || !(step > 0)) {
            std::cerr << "polyflex: bad range '" << expr << "' (want start:step:end)\n";
            std::exit(3);
        }
        const int count = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
        for (int k = 0; k < count; ++k) out.push_back(lo + k * step);
    } else {
        std::istringstream ss(expr);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                out.push_back(std::stod(tok));
            } catch (const std::exception&) {
                std::cerr << "polyflex: bad value '" << tok << "'\n";
                std::exit(3);
            }
        }
    }
    if (out.empty()) {
        std::cerr << "polyflex: empty l list\n";
        std::exit(3);
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        std::cerr << "polyflex: cannot write " << path << "\n";
        std::exit(1);
    }
    out << text;
}

int cmd_analyze(const std::string& mesh_path, const std::string& out_path, double tol_rank,
                double tol_coplanar) {
    pf_mesh* mesh = load_mesh_any(mesh_path);
    char* report = nullptr;
    check(pf_analyze(mesh, tol_rank, tol_coplanar, &report));
    write_text(out_path, report);
    pf_string_free(report);
    pf_mesh_free(mesh);
    return 0;
}

int cmd_bricard(const std::vector<double>& a, const std::vector<double>& b,
                const std::vector<double>& v, int preset, const std::string& out_path,
                bool as_obj) {
    double sa[3], sb[3], sv[3];
    pf_bricard_seed_preset(preset, sa, sb, sv);
    for (int i = 0; i < 3; ++i) {
        if (a.size() == 3) sa[i] = a[i];
        if (b.size() == 3) sb[i] = b[i];
        if (v.size() == 3) sv[i] = v[i];
    }
    pf_mesh* mesh = nullptr;
    check(pf_bricard_type1(sa, sb, sv, &mesh));
    if (out_path.empty()) {
        const std::string tmp = std::string(".polyflex_bricard_tmp.json");
        check(pf_mesh_save_json(mesh, tmp.c_str()));
        std::ifstream in(tmp);
        std::cout << in.rdbuf();
        std::remove(tmp.c_str());
    } else {
        check(as_obj ? pf_mesh_save_obj(mesh, out_path.c_str())
                     : pf_mesh_save_json(mesh, out_path.c_str()));
    }
    pf_mesh_free(mesh);
    return 0;
}

int cmd_counterexample(const std::string& params_path, const std::string& out_path,
                       const std::string& report_path, const std::string& field_path) {
    std::string params;
    if (!params_path.empty()) {
        std::ifstream in(params_path);
        if (!in) {
            std::cerr << "polyflex: cannot open params " << params_path << "\n";
            std::exit(3);
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        params = ss.str();
    }
    pf_mesh* mesh = nullptr;
    pf_field* field = nullptr;
    char* report = nullptr;
    check(pf_build_counterexample(params.empty() ? nullptr : params.c_str(), &mesh, &field,
                                  &report));
    write_text(report_path, report);
    if (!out_path.empty()) check(pf_mesh_save_json(mesh, out_path.c_str()));
    if (!field_path.empty()) check(pf_field_save_json(field, field_path.c_str()));
    pf_string_free(report);
    pf_field_free(field);
    pf_mesh_free(mesh);
    return 0;
}

int cmd_trace(const std::string& mesh_path, const json& config, const std::string& out_path,
              const std::string& obj_dir) {
    pf_mesh* mesh = load_mesh_any(mesh_path);
    pf_trace* trace = nullptr;
    check(pf_trace_flex(mesh, config.dump().c_str(), &trace));
    if (out_path.empty()) {
        const int n = pf_trace_step_count(trace);
        std::vector<double> rows(6 * n);
        pf_trace_rows(trace, rows.data());
        std::cout << "step,t,M,V,max_edge_drift,newton_iters\n";
        char buf[256];
        for (int k = 0; k < n; ++k) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%d\n",
                          static_cast<int>(rows[6 * k]), rows[6 * k + 1], rows[6 * k + 2],
                          rows[6 * k + 3], rows[6 * k + 4], static_cast<int>(rows[6 * k + 5]));
            std::cout << buf;
        }
    } else {
        check(pf_trace_save_csv(trace, out_path.c_str()));
    }
    if (!obj_dir.empty()) check(pf_trace_save_frames_obj(trace, obj_dir.c_str()));
    pf_trace_free(trace);
    pf_mesh_free(mesh);
    return 0;
}

int cmd_deltak(const std::string& lspec, const std::string& out_path) {
    const std::vector<double> ls = parse_l_values(lspec);
    std::ostringstream csv;
    csv << "l,M_mesh,M_closed,phi,psi,abs_diff,phi_alt\n";
    char buf[320];
    for (double l : ls) {
        json params;
        params["l"] = l;
        pf_mesh* mesh = nullptr;
        check(pf_delta_k_mesh(params.dump().c_str(), &mesh));
        double m_mesh = 0;
        check(pf_mesh_total_mean_curvature(mesh, &m_mesh));
        pf_mesh_free(mesh);
        double m_closed = 0, phi = 0, psi = 0, phi_alt = 0;
        check(pf_delta_k_closed_form(l, &m_closed, &phi, &psi, &phi_alt));
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", l, m_mesh,
                      m_closed, phi, psi, std::abs(m_mesh - m_closed), phi_alt);
        csv << buf;
    }
    write_text(out_path, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rigidity workbench for closed oriented triangulated polyhedra"};
    app.require_subcommand(1);

    std::string mesh_path, out_path, config_path, obj_dir, params_path, report_path, field_path,
        lspec;
    std::vector<double> seed_a, seed_b, seed_v;
    int preset = 0;
    bool flag_obj = false, flag_json = false;
    double tol_rank = -1, tol_coplanar = -1, tol_newton = -1, step_size = -1;
    int steps = -1, gauge_face = -1;

    auto* analyze = app.add_subcommand("analyze", "metrics, flex space and predicates report");
    analyze->add_option("mesh", mesh_path, "mesh file (.json or .obj)")->required();
    analyze->add_option("--out", out_path, "report file (default: stdout)");
    analyze->add_option("--tol-rank", tol_rank, "rank tolerance (default 1e-8)");
    analyze->add_option("--tol-coplanar", tol_coplanar,
                        "coplanarity tolerance / diameter (default 1e-9)");
    analyze->add_option("--config", config_path, "JSON config overriding flags");

    auto* bricard = app.add_subcommand("bricard", "build a flexible line-symmetric octahedron");
    bricard->add_option("--a", seed_a, "seed point A")->expected(3);
    bricard->add_option("--b", seed_b, "seed point B")->expected(3);
    bricard->add_option("--v", seed_v, "seed point V")->expected(3);
    bricard->add_option("--preset", preset, "seed preset index (default 0)");
    bricard->add_option("--out", out_path, "output mesh file (default: JSON to stdout)");
    bricard->add_flag("--obj", flag_obj, "write OBJ instead of JSON");
    bricard->add_flag("--json", flag_json, "write JSON (default)");
    bricard->add_option("--config", config_path, "JSON config overriding flags");

    auto* cex = app.add_subcommand(
        "counterexample", "glue an octahedron onto T2: a flex with nonzero flux");
    cex->add_option("--params", params_path, "params JSON file (defaults built in)");
    cex->add_option("--out", out_path, "mesh JSON output path");
    cex->add_option("--report-out", report_path, "report path (default: stdout)");
    cex->add_option("--field-out", field_path, "flex field JSON output path");
    cex->add_option("--config", config_path, "alias for --params");

    auto* trace = app.add_subcommand("trace", "follow the edge-length manifold from a flexible mesh");
    trace->add_option("mesh", mesh_path, "mesh file (.json or .obj)")->required();
    trace->add_option("--steps", steps, "number of steps (default 100)");
    trace->add_option("--step-size", step_size, "predictor length / diameter (default 0.01)");
    trace->add_option("--tol-newton", tol_newton, "corrector tolerance (default 1e-12)");
    trace->add_option("--tol-rank", tol_rank, "rank tolerance (default 1e-8)");
    trace->add_option("--gauge-face", gauge_face, "face carrying the 6 pins (default 0)");
    trace->add_option("--out", out_path, "CSV output (default: stdout)");
    trace->add_option("--obj-dir", obj_dir, "directory for per-frame OBJ files");
    trace->add_option("--config", config_path, "JSON config overriding flags");

    auto* deltak = app.add_subcommand("deltak", "closed-form vs mesh total mean curvature");
    deltak->add_option("l", lspec, "l values: '1,1.5,2' or range 'start:step:end'")->required();
    deltak->add_option("--out", out_path, "CSV output (default: stdout)");
    deltak->add_option("--config", config_path, "JSON config overriding flags");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 3;
    }

    const json cfg = load_config(config_path);

    if (analyze->parsed()) {
        override_from(cfg, "tol_rank", tol_rank);
        override_from(cfg, "tol_coplanar", tol_coplanar);
        override_from(cfg, "out", out_path);
        return cmd_analyze(mesh_path, out_path, tol_rank, tol_coplanar);
    }
    if (bricard->parsed()) {
        override_from(cfg, "preset", preset);
        override_from(cfg, "a", seed_a);
        override_from(cfg, "b", seed_b);
        override_from(cfg, "v", seed_v);
        if (flag_obj && flag_json) {
            std::cerr << "polyflex: choose one of --json / --obj\n";
            return 3;
        }
        return cmd_bricard(seed_a, seed_b, seed_v, preset, out_path, flag_obj);
    }
    if (cex->parsed()) {
        if (params_path.empty()) params_path = config_path;
        return cmd_counterexample(params_path, out_path, report_path, field_path);
    }
    if (trace->parsed()) {
        json config = json::object();
        if (steps > 0) config["steps"] = steps;
        if (step_size > 0) config["step_size"] = step_size;
        if (tol_newton > 0) config["newton_tol"] = tol_newton;
        if (tol_rank > 0) config["rank_tol"] = tol_rank;
        if (gauge_face >= 0) config["gauge_face"] = gauge_face;
        for (const auto& [key, value] : cfg.items()) config[key] = value;
        override_from(cfg, "out", out_path);
        return cmd_trace(mesh_path, config, out_path, obj_dir);
    }
    if (deltak->parsed()) {
        override_from(cfg, "out", out_path);
        return cmd_deltak(lspec, out_path);
    }
    return 3;
}
