#include "core/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace polyflex {

namespace {

using nlohmann::json;

Mesh mesh_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("faces"))
        throw Error(ErrorCode::ParseError, where + ": expected object with 'vertices' and 'faces'");
    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> faces;
    const auto& jv = j["vertices"];
    const auto& jf = j["faces"];
    if (!jv.is_array() || !jf.is_array())
        throw Error(ErrorCode::ParseError, where + ": 'vertices' and 'faces' must be arrays");
    for (size_t i = 0; i < jv.size(); ++i) {
        const auto& p = jv[i];
        if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() ||
            !p[2].is_number()) {
            std::ostringstream os;
            os << where << ": vertices[" << i << "] is not a number triple";
            throw Error(ErrorCode::ParseError, os.str());
        }
        verts.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
    for (size_t i = 0; i < jf.size(); ++i) {
        const auto& f = jf[i];
        if (!f.is_array() || f.size() != 3 || !f[0].is_number_integer() ||
            !f[1].is_number_integer() || !f[2].is_number_integer()) {
            std::ostringstream os;
            os << where << ": faces[" << i << "] is not an index triple";
            throw Error(ErrorCode::ParseError, os.str());
        }
        const long a = f[0].get<long>(), b = f[1].get<long>(), c = f[2].get<long>();
        const long n = static_cast<long>(verts.size());
        if (a < 0 || a >= n || b < 0 || b >= n || c < 0 || c >= n) {
            std::ostringstream os;
            os << where << ": faces[" << i << "] index out of range";
            throw Error(ErrorCode::ParseError, os.str());
        }
        faces.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
    }
    return Mesh::build(std::move(verts), std::move(faces));
}

json mesh_to_json(const Mesh& mesh) {
    json jv = json::array();
    for (const auto& p : mesh.vertices()) jv.push_back({p.x(), p.y(), p.z()});
    json jf = json::array();
    for (const auto& f : mesh.faces()) jf.push_back({f[0], f[1], f[2]});
    json j;
    j["vertices"] = std::move(jv);
    j["faces"] = std::move(jf);
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace

Mesh mesh_from_json_string(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::ParseError, "malformed JSON");
    return mesh_from_json(j, "mesh");
}

std::string mesh_to_json_string(const Mesh& mesh) { return mesh_to_json(mesh).dump(); }

Mesh load_mesh_json(const std::string& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::ParseError, "malformed JSON in " + path);
    return mesh_from_json(j, path);
}

void save_mesh_json(const Mesh& mesh, const std::string& path) {
    write_file(path, mesh_to_json(mesh).dump() + "\n");
}

Mesh load_mesh_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> faces;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z)) {
                std::ostringstream os;
                os << path << ":" << lineno << ": bad vertex line";
                throw Error(ErrorCode::ParseError, os.str());
            }
            verts.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<long> idx;
            std::string tok;
            while (ls >> tok) {
                // accept "i", "i/..", "i//.." forms; only the vertex index is used
                const size_t slash = tok.find('/');
                try {
                    idx.push_back(std::stol(tok.substr(0, slash)));
                } catch (const std::exception&) {
                    std::ostringstream os;
                    os << path << ":" << lineno << ": bad face token '" << tok << "'";
                    throw Error(ErrorCode::ParseError, os.str());
                }
            }
            if (idx.size() != 3) {
                std::ostringstream os;
                os << path << ":" << lineno << ": face with " << idx.size()
                   << " vertices (triangles only)";
                throw Error(ErrorCode::UnsupportedFace, os.str());
            }
            const long n = static_cast<long>(verts.size());
            std::array<int, 3> f{};
            for (int k = 0; k < 3; ++k) {
                if (idx[k] < 1 || idx[k] > n) {
                    std::ostringstream os;
                    os << path << ":" << lineno << ": face index out of range";
                    throw Error(ErrorCode::ParseError, os.str());
                }
                f[k] = static_cast<int>(idx[k] - 1);
            }
            faces.push_back(f);
        }
    }
    return Mesh::build(std::move(verts), std::move(faces));
}

void save_mesh_obj(const Mesh& mesh, const std::string& path) {
    std::ostringstream out;
    char buf[128];
    for (const auto& p : mesh.vertices()) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
        out << buf;
    }
    for (const auto& f : mesh.faces()) out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
    write_file(path, out.str());
}

}  // namespace polyflex
