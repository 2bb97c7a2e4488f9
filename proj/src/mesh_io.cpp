#include "isoarea/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace isoarea {

namespace {
std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << std::setprecision(17);
  return out;
}
}  // namespace

void write_obj(const TriMesh& mesh, const std::string& path) {
  auto out = open_out(path);
  const int dim = static_cast<int>(mesh.vertices.rows());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    out << "v";
    for (int c = 0; c < 3; ++c) out << ' ' << (c < dim ? mesh.vertices(c, v) : 0.0);
    out << '\n';
  }
  for (const auto& tri : mesh.faces)
    out << "f " << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
}

void write_vertices_csv(const TriMesh& mesh, const std::string& path) {
  auto out = open_out(path);
  out << "vertex_id";
  for (int k = 0; k < mesh.n; ++k) out << ",x" << k + 1 << ",y" << k + 1;
  out << '\n';
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    out << v;
    for (int c = 0; c < 2 * mesh.n; ++c) out << ',' << mesh.vertices(c, v);
    out << '\n';
  }
}

void write_faces_csv(const TriMesh& mesh, const std::string& path) {
  auto out = open_out(path);
  out << "v0,v1,v2\n";
  for (const auto& tri : mesh.faces) out << tri[0] << ',' << tri[1] << ',' << tri[2] << '\n';
}

}  // namespace isoarea
