#pragma once

#include <string>

#include "isoarea/trimesh.hpp"

namespace isoarea {

// Wavefront-style viewer file: vertices projected to the first 3 coordinates
// (padded with 0 when 2n < 3), faces 1-indexed.
void write_obj(const TriMesh& mesh, const std::string& path);

// Lossless vertex table: vertex_id,x1,y1,...,xn,yn.
void write_vertices_csv(const TriMesh& mesh, const std::string& path);

// Face table: v0,v1,v2.
void write_faces_csv(const TriMesh& mesh, const std::string& path);

}  // namespace isoarea
