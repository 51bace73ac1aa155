#pragma once

#include <string>

#include "core/mesh.hpp"

namespace polyflex {

// Mesh JSON schema: {"vertices": [[x,y,z], ...], "faces": [[i,j,k], ...]},
// zero-based indices. OBJ: "v x y z" then "f i j k" (one-based), triangles
// only; a non-triangular face raises UnsupportedFace.

Mesh load_mesh_json(const std::string& path);
void save_mesh_json(const Mesh& mesh, const std::string& path);

Mesh load_mesh_obj(const std::string& path);
void save_mesh_obj(const Mesh& mesh, const std::string& path);

std::string mesh_to_json_string(const Mesh& mesh);
Mesh mesh_from_json_string(const std::string& text);

}  // namespace polyflex
