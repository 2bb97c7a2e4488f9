#include "isoarea/trimesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "isoarea/parallel.hpp"

namespace isoarea {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

struct EdgeInfo {
  int count = 0;
  int face[2] = {-1, -1};
};

std::unordered_map<std::uint64_t, EdgeInfo> edge_incidence(const TriMesh& mesh) {
  std::unordered_map<std::uint64_t, EdgeInfo> edges;
  edges.reserve(mesh.faces.size() * 2);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto& tri = mesh.faces[f];
    for (int e = 0; e < 3; ++e) {
      auto& info = edges[edge_key(tri[e], tri[(e + 1) % 3])];
      if (info.count < 2) info.face[info.count] = f;
      ++info.count;
    }
  }
  return edges;
}

std::vector<int> boundary_from_incidence(const TriMesh& mesh) {
  std::vector<int> verts;
  for (const auto& [key, info] : edge_incidence(mesh))
    if (info.count == 1) {
      verts.push_back(static_cast<int>(key >> 32));
      verts.push_back(static_cast<int>(key & 0xffffffffu));
    }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  return verts;
}

bool compute_orientability(const TriMesh& mesh) {
  // Propagate a consistent orientation across shared edges; a conflict
  // means no consistent face orientation exists.
  auto edges = edge_incidence(mesh);
  std::unordered_map<std::uint64_t, std::array<int, 2>> shared;
  for (const auto& [key, info] : edges)
    if (info.count == 2) shared[key] = {info.face[0], info.face[1]};

  auto edge_dir = [&](int f, int a, int b) {
    // +1 if (a,b) appears in face f's cyclic order, -1 if (b,a).
    const auto& tri = mesh.faces[f];
    for (int e = 0; e < 3; ++e) {
      if (tri[e] == a && tri[(e + 1) % 3] == b) return 1;
      if (tri[e] == b && tri[(e + 1) % 3] == a) return -1;
    }
    return 0;
  };

  std::vector<int> flip(mesh.face_count(), 0);  // 0 unvisited, +1/-1 assigned
  for (int start = 0; start < mesh.face_count(); ++start) {
    if (flip[start] != 0) continue;
    flip[start] = 1;
    std::queue<int> bfs;
    bfs.push(start);
    while (!bfs.empty()) {
      int f = bfs.front();
      bfs.pop();
      const auto& tri = mesh.faces[f];
      for (int e = 0; e < 3; ++e) {
        int a = tri[e], b = tri[(e + 1) % 3];
        auto it = shared.find(edge_key(a, b));
        if (it == shared.end()) continue;
        int g = it->second[0] == f ? it->second[1] : it->second[0];
        // Consistent orientation: the shared edge runs oppositely in the
        // two faces (after flips).
        int rel = -edge_dir(f, a, b) * edge_dir(g, a, b);
        int want = flip[f] * rel;
        if (flip[g] == 0) {
          flip[g] = want;
          bfs.push(g);
        } else if (flip[g] != want) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

TriMesh triangulate(const ParamSurface& surf, int res_t, int res_s) {
  if (res_t < 2 || res_s < 2) throw std::invalid_argument("triangulate: resolution must be >= 2");
  const bool periodic = surf.identification != EdgeIdentification::none;
  const bool mobius = surf.identification == EdgeIdentification::mobius;
  if (mobius && res_t % 2 != 0)
    throw std::invalid_argument("triangulate: mobius gluing needs even res_t");

  const double dt = (surf.t1 - surf.t0) / res_t;
  const double ds = (surf.s1 - surf.s0) / res_s;

  // Canonical node ids over the (res_t+1) x (res_s+1) logical grid. The
  // mobius top row identifies i with i + res_t/2 (mod res_t); pick the
  // representative in [0, res_t/2).
  auto canonical = [&](int i, int j) -> std::pair<int, int> {
    if (periodic && i == res_t) i = 0;
    if (mobius && j == res_s) i %= res_t / 2;
    return {i, j};
  };

  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> nodes;
  auto vid = [&](int i, int j) {
    auto key = canonical(i, j);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    ids.emplace(key, id);
    nodes.push_back(key);
    return id;
  };

  TriMesh mesh;
  mesh.n = surf.n;
  mesh.faces.reserve(static_cast<std::size_t>(res_t) * res_s * 2);
  for (int i = 0; i < res_t; ++i)
    for (int j = 0; j < res_s; ++j) {
      int a = vid(i, j), b = vid(i + 1, j), c = vid(i, j + 1), d = vid(i + 1, j + 1);
      mesh.faces.push_back({a, b, d});
      mesh.faces.push_back({a, d, c});
    }

  mesh.vertices.resize(2 * surf.n, static_cast<int>(nodes.size()));
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    auto [i, j] = nodes[k];
    mesh.vertices.col(static_cast<int>(k)) = surf.map(surf.t0 + i * dt, surf.s0 + j * ds);
  }

  mesh.boundary_vertices = boundary_from_incidence(mesh);
  mesh.orientable = compute_orientability(mesh);
  return mesh;
}

double face_area(const TriMesh& mesh, int f) {
  const auto& tri = mesh.faces[f];
  RealVector u = mesh.vertices.col(tri[1]) - mesh.vertices.col(tri[0]);
  RealVector v = mesh.vertices.col(tri[2]) - mesh.vertices.col(tri[0]);
  double g = u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2);
  return 0.5 * std::sqrt(std::max(g, 0.0));
}

double mesh_area(const TriMesh& mesh) {
  const int nf = mesh.face_count();
  std::vector<double> areas(nf);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int f = 0; f < nf; ++f) areas[f] = face_area(mesh, f);
  return pairwise_sum(areas);
}

double mesh_area_serial(const TriMesh& mesh) {
  std::vector<double> areas(mesh.face_count());
  for (int f = 0; f < mesh.face_count(); ++f) areas[f] = face_area(mesh, f);
  return pairwise_sum(areas);
}

namespace {
double face_symplectic_cosine(const TriMesh& mesh, int f) {
  const auto& tri = mesh.faces[f];
  RealVector u = mesh.vertices.col(tri[1]) - mesh.vertices.col(tri[0]);
  RealVector v = mesh.vertices.col(tri[2]) - mesh.vertices.col(tri[0]);
  double a = face_area(mesh, f);
  if (a <= 0.0) return 0.0;
  return std::abs(symplectic_form(u, v)) / (2.0 * a);
}
}  // namespace

double mesh_isotropy_residual(const TriMesh& mesh) {
  const int nf = mesh.face_count();
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst) num_threads(max_threads())
  for (int f = 0; f < nf; ++f) worst = std::max(worst, face_symplectic_cosine(mesh, f));
  return worst;
}

double mesh_isotropy_residual_serial(const TriMesh& mesh) {
  double worst = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f)
    worst = std::max(worst, face_symplectic_cosine(mesh, f));
  return worst;
}

int euler_characteristic(const TriMesh& mesh) {
  auto edges = edge_incidence(mesh);
  return mesh.vertex_count() - static_cast<int>(edges.size()) + mesh.face_count();
}

std::vector<std::vector<int>> boundary_cycles(const TriMesh& mesh) {
  std::map<int, std::vector<int>> next;  // boundary adjacency
  for (const auto& [key, info] : edge_incidence(mesh))
    if (info.count == 1) {
      int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
      next[a].push_back(b);
      next[b].push_back(a);
    }

  std::vector<std::vector<int>> cycles;
  std::map<int, bool> used;
  for (const auto& [v, nbrs] : next) {
    if (used[v]) continue;
    std::vector<int> cycle{v};
    used[v] = true;
    int prev = -1, cur = v;
    while (true) {
      const auto& cand = next[cur];
      int nxt = (cand.size() > 0 && cand[0] != prev) ? cand[0] : (cand.size() > 1 ? cand[1] : -1);
      if (nxt < 0 || nxt == cycle.front()) break;
      cycle.push_back(nxt);
      used[nxt] = true;
      prev = cur;
      cur = nxt;
    }
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

void validate_mesh(const TriMesh& mesh) {
  const int nv = mesh.vertex_count();
  for (const auto& tri : mesh.faces) {
    for (int v : tri)
      if (v < 0 || v >= nv) throw std::invalid_argument("mesh: face index out of range");
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw std::invalid_argument("mesh: degenerate face (repeated vertex)");
  }
  for (int f = 0; f < mesh.face_count(); ++f)
    if (!(face_area(mesh, f) > 0.0))
      throw std::invalid_argument("mesh: zero-area face " + std::to_string(f));
  if (boundary_from_incidence(mesh) != mesh.boundary_vertices)
    throw std::invalid_argument("mesh: stored boundary set does not match edge incidence");
}

}  // namespace isoarea
