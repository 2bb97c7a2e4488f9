#pragma once

#include <optional>
#include <vector>

#include "isoarea/rng.hpp"
#include "isoarea/trimesh.hpp"

namespace isoarea {

// Fixed-boundary discrete problem: minimize mesh area over meshes whose
// faces carry (numerically) zero symplectic area. The boundary cycle never
// moves. Current scope: the boundary is a circle of the given radius in the
// plane selected by plane_a (1 means the complex line C^1, values in [0,1)
// the canonical plane P_a).
struct IsotropicOptProblem {
  enum class Topology { disk, mobius };

  std::vector<RealVector> boundary;
  Topology topology = Topology::mobius;
  double plane_a = 1.0;
  double radius = 1.0;
  int n = 2;
};

// Circle boundary sampled at `segments` points in the plane selected by
// plane_a.
IsotropicOptProblem make_circle_problem(double plane_a, double radius,
                                        IsotropicOptProblem::Topology topology, int segments,
                                        int n);

struct OptSchedule {
  int outer_iterations = 6;       // penalty continuation steps
  double mu0 = 1.0;               // raised automatically to bound the area excursion
  double mu_growth = 8.0;
  int inner_budget = 2000;        // gradient steps per continuation stage
  double grad_tol = 1e-5;         // sup-norm of the free gradient
  double residual_target = 1e-4;  // per-face symplectic cosine
  bool final_projection = true;   // restore exact face isotropy at the end
  int polish_budget = 300;        // tangent-space area-descent steps after continuation
};

struct TraceRow {
  int outer = 0;   // continuation stage; -1 marks the tangent polish phase
  int iter = 0;
  double mu = 0.0;
  double objective = 0.0;
  double area = 0.0;
  double residual = 0.0;
  double grad_norm = 0.0;
};

struct OptReport {
  double final_area = 0.0;
  double final_residual = 0.0;
  double area_over_pi = 0.0;  // area / (pi r^2)
  bool converged = false;
  std::vector<TraceRow> trace;
  std::uint64_t seed = 0;
  int res_t = 0, res_s = 0;
  TriMesh mesh;
};

// Warm start: mobius topology triangulates the band over the problem's
// plane scaled to the boundary circle; disk topology cones the boundary to
// the center with 1e-3 noise on the interior.
TriMesh init_mesh(const IsotropicOptProblem& problem, int res_t, int res_s, Rng& rng);

// mesh_area + mu * sum over faces of (omega(e1,e2)/2)^2. Equals mesh_area
// on exactly isotropic meshes for every mu.
double penalized_objective(const TriMesh& mesh, double mu);
double penalized_objective_serial(const TriMesh& mesh, double mu);

// Analytic gradient of the penalized objective with respect to vertex
// coordinates; columns of fixed (boundary) vertices are zero.
Eigen::MatrixXd objective_gradient(const TriMesh& mesh, double mu,
                                   const std::vector<char>& fixed);
Eigen::MatrixXd objective_gradient_serial(const TriMesh& mesh, double mu,
                                          const std::vector<char>& fixed);

// Quadratic-penalty continuation with backtracking gradient descent inside.
OptReport minimize(const IsotropicOptProblem& problem, const OptSchedule& schedule, int res_t,
                   int res_s, RandomSeed seed);

// Gauss-Newton restoration onto the exact constraint set {per-face
// symplectic area = 0}, moving only non-fixed vertices (least-norm steps).
// Returns the final sup-norm of the per-face symplectic areas. Quadratic
// local convergence; from a warm start a handful of iterations reaches
// round-off, giving a mesh on which Lagrangian identities hold exactly.
double project_isotropic(TriMesh& mesh, const std::vector<char>& fixed, int max_iters = 200,
                         double tol = 1e-12);

// Convenience: fixed = boundary vertices.
double project_isotropic(TriMesh& mesh, int max_iters = 200, double tol = 1e-12);

struct LambdaRow {
  int res_t = 0, res_s = 0;
  double area_ratio = 0.0;  // area / (pi r^2)
  double residual = 0.0;
  bool converged = false;
};

struct LambdaTable {
  std::vector<LambdaRow> rows;
  std::optional<double> proved_lower;  // 3 for C^1 in C^2, 2 for C^1 in C^n
  double observed_upper = 0.0;         // min converged ratio
};

// Runs minimize across mesh resolutions and brackets the area-ratio
// constant of the problem's plane.
LambdaTable estimate_lambda(int n, double plane_a, const OptSchedule& schedule,
                            const std::vector<std::pair<int, int>>& resolutions, double radius,
                            RandomSeed seed);

}  // namespace isoarea
