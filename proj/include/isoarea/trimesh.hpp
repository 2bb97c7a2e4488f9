#pragma once

#include <array>
#include <vector>

#include "isoarea/surface.hpp"

namespace isoarea {

// Indexed triangle mesh in R^2n. Vertices are stored as columns so face
// loops read contiguous memory.
struct TriMesh {
  Eigen::MatrixXd vertices;                 // 2n x V
  std::vector<std::array<int, 3>> faces;
  std::vector<int> boundary_vertices;       // sorted; from edge incidence
  bool orientable = true;
  int n = 0;

  int vertex_count() const { return static_cast<int>(vertices.cols()); }
  int face_count() const { return static_cast<int>(faces.size()); }
  RealVector vertex(int i) const { return vertices.col(i); }
};

// Regular grid triangulation honoring the surface's edge identifications.
// For the mobius identification res_t must be even (the top edge glues to
// itself shifted by half a period).
TriMesh triangulate(const ParamSurface& surf, int res_t, int res_s);

// Sum of triangle areas (Gram determinant per face).
double mesh_area(const TriMesh& mesh);
double mesh_area_serial(const TriMesh& mesh);

// max over faces of |omega(e1, e2)| / (2 * area): the per-face symplectic
// cosine. 0 for isotropic faces, 1 for faces in a complex line.
double mesh_isotropy_residual(const TriMesh& mesh);
double mesh_isotropy_residual_serial(const TriMesh& mesh);

double face_area(const TriMesh& mesh, int f);

// V - E + F.
int euler_characteristic(const TriMesh& mesh);

// Boundary edges (exactly one adjacent face) chained into cycles; each cycle
// is an ordered vertex list.
std::vector<std::vector<int>> boundary_cycles(const TriMesh& mesh);

// Face indices valid, faces non-degenerate, stored boundary set matches the
// one recomputed from edge incidence. Throws on violation.
void validate_mesh(const TriMesh& mesh);

}  // namespace isoarea
