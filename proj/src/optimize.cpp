#include "isoarea/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "isoarea/mobius.hpp"
#include "isoarea/parallel.hpp"

namespace isoarea {

namespace {
constexpr double kMinFaceArea = 1e-9;

ParamSurface plane_band(double plane_a, int n) {
  return plane_a >= 1.0 ? complex_band(n) : noncomplex_band(plane_a, n);
}

RealVector circle_point(double plane_a, double radius, int n, double t) {
  ParamSurface band = plane_band(plane_a, n);
  return RealVector(radius * band.map(t, 0.0));
}

std::vector<char> fixed_mask(const TriMesh& mesh) {
  std::vector<char> fixed(mesh.vertex_count(), 0);
  for (int v : mesh.boundary_vertices) fixed[v] = 1;
  return fixed;
}

double face_penalty_sq(const TriMesh& mesh, int f) {
  const auto& tri = mesh.faces[f];
  RealVector u = mesh.vertices.col(tri[1]) - mesh.vertices.col(tri[0]);
  RealVector v = mesh.vertices.col(tri[2]) - mesh.vertices.col(tri[0]);
  double w = 0.5 * symplectic_form(u, v);
  return w * w;
}

double min_face_area(const TriMesh& mesh) {
  double m = std::numeric_limits<double>::infinity();
  for (int f = 0; f < mesh.face_count(); ++f) m = std::min(m, face_area(mesh, f));
  return m;
}

}  // namespace

IsotropicOptProblem make_circle_problem(double plane_a, double radius,
                                        IsotropicOptProblem::Topology topology, int segments,
                                        int n) {
  if (!(plane_a >= 0.0 && plane_a <= 1.0))
    throw std::invalid_argument("make_circle_problem: plane_a must lie in [0,1]");
  if (radius <= 0.0) throw std::invalid_argument("make_circle_problem: radius must be positive");
  IsotropicOptProblem problem;
  problem.plane_a = plane_a;
  problem.radius = radius;
  problem.topology = topology;
  problem.n = n;
  problem.boundary.reserve(segments);
  for (int i = 0; i < segments; ++i)
    problem.boundary.push_back(circle_point(plane_a, radius, n, 2.0 * M_PI * i / segments));
  return problem;
}

TriMesh init_mesh(const IsotropicOptProblem& problem, int res_t, int res_s, Rng& rng) {
  if (static_cast<int>(problem.boundary.size()) != res_t)
    throw std::invalid_argument("init_mesh: boundary cycle length must equal res_t");

  if (problem.topology == IsotropicOptProblem::Topology::mobius) {
    ParamSurface band = scaled(plane_band(problem.plane_a, problem.n), problem.radius);
    return triangulate(band, res_t, res_s);
  }

  // Disk: concentric rings coned to a center vertex, interior perturbed off
  // the flat (complex) disk.
  TriMesh mesh;
  mesh.n = problem.n;
  const int rings = res_s;  // ring 0 = boundary
  const int nv = res_t * rings + 1;
  mesh.vertices.resize(2 * problem.n, nv);
  RealVector center = RealVector::Zero(2 * problem.n);
  for (int j = 0; j < rings; ++j) {
    double shrink = 1.0 - static_cast<double>(j) / rings;
    for (int i = 0; i < res_t; ++i) {
      RealVector v = center + shrink * (problem.boundary[i] - center);
      if (j > 0)
        for (int c = 0; c < 2 * problem.n; ++c)
          v[c] += 1e-3 * problem.radius * rng.uniform(-1.0, 1.0);
      mesh.vertices.col(j * res_t + i) = v;
    }
  }
  RealVector apex = center;
  for (int c = 0; c < 2 * problem.n; ++c)
    apex[c] += 1e-3 * problem.radius * rng.uniform(-1.0, 1.0);
  mesh.vertices.col(nv - 1) = apex;

  for (int j = 0; j + 1 < rings; ++j)
    for (int i = 0; i < res_t; ++i) {
      int a = j * res_t + i, b = j * res_t + (i + 1) % res_t;
      int c = (j + 1) * res_t + i, d = (j + 1) * res_t + (i + 1) % res_t;
      mesh.faces.push_back({a, b, d});
      mesh.faces.push_back({a, d, c});
    }
  for (int i = 0; i < res_t; ++i) {
    int a = (rings - 1) * res_t + i, b = (rings - 1) * res_t + (i + 1) % res_t;
    mesh.faces.push_back({a, b, nv - 1});
  }

  mesh.boundary_vertices.resize(res_t);
  for (int i = 0; i < res_t; ++i) mesh.boundary_vertices[i] = i;
  std::sort(mesh.boundary_vertices.begin(), mesh.boundary_vertices.end());
  mesh.orientable = true;
  validate_mesh(mesh);
  return mesh;
}

namespace {
double penalized_objective_impl(const TriMesh& mesh, double mu, bool parallel) {
  const int nf = mesh.face_count();
  std::vector<double> vals(nf);
#pragma omp parallel for schedule(static) num_threads(max_threads()) if (parallel)
  for (int f = 0; f < nf; ++f) vals[f] = face_area(mesh, f) + mu * face_penalty_sq(mesh, f);
  return pairwise_sum(vals);
}

Eigen::MatrixXd gradient_impl(const TriMesh& mesh, double mu, const std::vector<char>& fixed,
                              bool parallel) {
  const int nf = mesh.face_count();
  const auto dim = mesh.vertices.rows();
  // Per-face contributions to the three corners, scattered serially so the
  // result does not depend on thread interleaving.
  Eigen::MatrixXd contrib(3 * dim, nf);

#pragma omp parallel for schedule(static) num_threads(max_threads()) if (parallel)
  for (int f = 0; f < nf; ++f) {
    const auto& tri = mesh.faces[f];
    RealVector u = mesh.vertices.col(tri[1]) - mesh.vertices.col(tri[0]);
    RealVector v = mesh.vertices.col(tri[2]) - mesh.vertices.col(tri[0]);
    double uu = u.squaredNorm(), vv = v.squaredNorm(), uv = u.dot(v);
    double area = 0.5 * std::sqrt(std::max(uu * vv - uv * uv, 0.0));
    RealVector gb, gc;
    if (area > kMinFaceArea) {
      gb = (vv * u - uv * v) / (4.0 * area);
      gc = (uu * v - uv * u) / (4.0 * area);
    } else {
      gb = RealVector::Zero(dim);
      gc = RealVector::Zero(dim);
    }
    double w = 0.5 * symplectic_form(u, v);
    RealVector ju = apply_complex_structure(u), jv = apply_complex_structure(v);
    gb += mu * w * (-jv);
    gc += mu * w * ju;
    contrib.col(f).segment(0, dim) = -(gb + gc);
    contrib.col(f).segment(dim, dim) = gb;
    contrib.col(f).segment(2 * dim, dim) = gc;
  }

  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(dim, mesh.vertex_count());
  for (int f = 0; f < nf; ++f) {
    const auto& tri = mesh.faces[f];
    for (int k = 0; k < 3; ++k) grad.col(tri[k]) += contrib.col(f).segment(k * dim, dim);
  }
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (fixed[v]) grad.col(v).setZero();
  return grad;
}
}  // namespace

double penalized_objective(const TriMesh& mesh, double mu) {
  return penalized_objective_impl(mesh, mu, true);
}
double penalized_objective_serial(const TriMesh& mesh, double mu) {
  return penalized_objective_impl(mesh, mu, false);
}

Eigen::MatrixXd objective_gradient(const TriMesh& mesh, double mu,
                                   const std::vector<char>& fixed) {
  for (int f = 0; f < mesh.face_count(); ++f)
    if (!(face_area(mesh, f) > kMinFaceArea)) {
      std::ostringstream msg;
      msg << "objective_gradient: degenerate face " << f;
      throw std::invalid_argument(msg.str());
    }
  return gradient_impl(mesh, mu, fixed, true);
}

Eigen::MatrixXd objective_gradient_serial(const TriMesh& mesh, double mu,
                                          const std::vector<char>& fixed) {
  return gradient_impl(mesh, mu, fixed, false);
}

namespace {

double constraint_inf(const TriMesh& mesh) {
  double worst = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto& tri = mesh.faces[f];
    RealVector u = mesh.vertices.col(tri[1]) - mesh.vertices.col(tri[0]);
    RealVector v = mesh.vertices.col(tri[2]) - mesh.vertices.col(tri[0]);
    worst = std::max(worst, std::abs(0.5 * symplectic_form(u, v)));
  }
  return worst;
}

// c_f = omega(e1, e2)/2 per face and its sparse jacobian in the free vertex
// coordinates (columns of fixed vertices are omitted as zeros). With an
// area_target >= 0, one extra row carries the area gradient with residual
// (area - target), so restoration steps steer the area back to the target
// instead of drifting.
void isotropy_system(const TriMesh& mesh, const std::vector<char>& fixed, Eigen::VectorXd& c,
                     Eigen::SparseMatrix<double>& jac, double area_target) {
  const int nf = mesh.face_count();
  const auto dim = mesh.vertices.rows();
  const bool with_area = area_target >= 0.0;
  const int rows = nf + (with_area ? 1 : 0);
  c.resize(rows);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nf) * 3 * dim);
  for (int f = 0; f < nf; ++f) {
    const auto& tri = mesh.faces[f];
    RealVector u = mesh.vertices.col(tri[1]) - mesh.vertices.col(tri[0]);
    RealVector v = mesh.vertices.col(tri[2]) - mesh.vertices.col(tri[0]);
    c[f] = 0.5 * symplectic_form(u, v);
    RealVector gb = -0.5 * apply_complex_structure(v);
    RealVector gc = 0.5 * apply_complex_structure(u);
    RealVector ga = -(gb + gc);
    const RealVector* g[3] = {&ga, &gb, &gc};
    for (int k = 0; k < 3; ++k) {
      if (fixed[tri[k]]) continue;
      for (int d = 0; d < dim; ++d) trips.emplace_back(f, tri[k] * dim + d, (*g[k])[d]);
    }
  }
  if (with_area) {
    Eigen::MatrixXd ag = objective_gradient_serial(mesh, 0.0, fixed);
    // Equilibrate the area row against the face rows, so one damping
    // parameter treats all rows evenly.
    double face_row_sq = 0.0;
    for (const auto& t : trips) face_row_sq += t.value() * t.value();
    double row_target = std::sqrt(face_row_sq / std::max(nf, 1));
    double scale = row_target / std::max(ag.norm(), 1e-12);
    for (int v = 0; v < mesh.vertex_count(); ++v)
      for (int d = 0; d < dim; ++d)
        if (ag(d, v) != 0.0) trips.emplace_back(nf, v * dim + d, scale * ag(d, v));
    c[nf] = scale * (mesh_area_serial(mesh) - area_target);
  }
  jac.resize(rows, mesh.vertex_count() * dim);
  jac.setFromTriplets(trips.begin(), trips.end());
}

// Solves (J J^T + damping * mean_diag * I) y = rhs by CG. Rows are assumed
// equilibrated; the additive term tames the small-singular-value modes that
// would otherwise send least-norm steps far away.
Eigen::VectorXd normal_solve(const Eigen::SparseMatrix<double>& jac, const Eigen::VectorXd& rhs,
                             double damping) {
  Eigen::SparseMatrix<double> normal = jac * Eigen::SparseMatrix<double>(jac.transpose());
  double diag_mean = 0.0;
  for (int f = 0; f < normal.rows(); ++f) diag_mean += normal.coeff(f, f);
  diag_mean /= std::max<int>(normal.rows(), 1);
  for (int f = 0; f < normal.rows(); ++f)
    normal.coeffRef(f, f) += damping * diag_mean + 1e-300;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-13);
  cg.setMaxIterations(4000);
  cg.compute(normal);
  return cg.solve(rhs);
}

}  // namespace

double project_isotropic(TriMesh& mesh, const std::vector<char>& fixed, int max_iters,
                         double tol) {
  const auto dim = mesh.vertices.rows();
  const int nv = mesh.vertex_count();

  double min_edge = std::numeric_limits<double>::infinity();
  for (const auto& tri : mesh.faces)
    for (int e = 0; e < 3; ++e)
      min_edge = std::min(
          min_edge, (mesh.vertices.col(tri[e]) - mesh.vertices.col(tri[(e + 1) % 3])).norm());
  const double max_move = 0.25 * min_edge;  // keeps the restoration local

  double damping = 1e-3;
  double prev = constraint_inf(mesh);
  const double area_target = mesh_area_serial(mesh);
  Eigen::VectorXd c;
  Eigen::SparseMatrix<double> jac;
  for (int iter = 0; iter < max_iters; ++iter) {
    if (prev <= tol) return prev;

    // The area row (re-anchored at the current area, so its residual is
    // exactly zero) blocks drift along area-changing directions; the face
    // constraints get zeroed within the area level set as far as possible.
    isotropy_system(mesh, fixed, c, jac, mesh_area_serial(mesh));
    // Levenberg damping keeps the least-norm step from chasing
    // near-singular constraint combinations far from the input mesh.
    Eigen::VectorXd lambda = normal_solve(jac, c, damping);
    Eigen::VectorXd dx = jac.transpose() * lambda;
    double biggest = 0.0;
    for (int v = 0; v < nv; ++v)
      biggest = std::max(biggest, dx.segment(v * dim, dim).norm());
    double scale = biggest > max_move ? max_move / biggest : 1.0;
    for (int v = 0; v < nv; ++v) mesh.vertices.col(v) -= scale * dx.segment(v * dim, dim);

    double now = constraint_inf(mesh);
    if (now < prev) {
      damping *= 0.3;  // toward the pure Gauss-Newton endgame
    } else {
      damping = std::min(std::max(damping * 10.0, 1e-6), 1e-1);
    }
    prev = now;
  }
  return prev;
}

double project_isotropic(TriMesh& mesh, int max_iters, double tol) {
  auto fixed = fixed_mask(mesh);
  return project_isotropic(mesh, fixed, max_iters, tol);
}

OptReport minimize(const IsotropicOptProblem& problem, const OptSchedule& schedule, int res_t,
                   int res_s, RandomSeed seed) {
  Rng rng(seed);
  TriMesh mesh = init_mesh(problem, res_t, res_s, rng);
  const auto fixed = fixed_mask(mesh);
  const double boundary_area = M_PI * problem.radius * problem.radius;

  OptReport report;
  report.seed = seed.seed;
  report.res_t = res_t;
  report.res_s = res_s;

  // The mobius warm start is a hair away from the constraint set; restoring
  // it first (area-neutrally) makes the penalized objective start at the
  // bare area, and monotone descent then keeps the area at or below the
  // band's value for the entire run.
  if (problem.topology == IsotropicOptProblem::Topology::mobius)
    project_isotropic(mesh, fixed);

  // A fully collapsed (complex) configuration would save at most area_0 of
  // area while paying roughly mu * sum A_f^2 of penalty; mu0 is raised
  // until that trade loses by a wide margin, which pins the iterate to the
  // neighborhood of the isotropic start.
  double mu = schedule.mu0;
  {
    double area0 = mesh_area(mesh);
    double sum_a2 = 0.0;
    for (int f = 0; f < mesh.face_count(); ++f) {
      double a = face_area(mesh, f);
      sum_a2 += a * a;
    }
    if (sum_a2 > 0.0) mu = std::max(mu, 200.0 * area0 / sum_a2);
  }

  bool grad_converged = false;
  TriMesh cand = mesh;  // vertices rewritten by the line search
  for (int outer = 0; outer < schedule.outer_iterations; ++outer) {
    double obj = penalized_objective(mesh, mu);
    Eigen::MatrixXd grad = objective_gradient(mesh, mu, fixed);
    double step = 1e-3;
    grad_converged = false;
    int stall = 0;

    for (int iter = 0; iter < schedule.inner_budget; ++iter) {
      double gnorm = grad.cwiseAbs().maxCoeff();
      if (gnorm <= schedule.grad_tol || stall >= 25) {
        // Either first-order stationary or no measurable progress at double
        // precision; both end the stage.
        grad_converged = true;
        break;
      }
      double g2 = grad.squaredNorm();

      // Backtracking (Armijo) line search along -grad, rejecting steps that
      // collapse a face below the area floor.
      double trial = step;
      double cand_obj = 0.0;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        cand.vertices = mesh.vertices - trial * grad;
        cand_obj = penalized_objective(cand, mu);
        if (cand_obj <= obj - 1e-4 * trial * g2 && min_face_area(cand) > kMinFaceArea) {
          accepted = true;
          break;
        }
        trial *= 0.5;
      }
      if (!accepted) break;  // no admissible descent step at this scale

      Eigen::MatrixXd new_grad = objective_gradient(cand, mu, fixed);
      // Barzilai-Borwein step seed for the next iterate.
      Eigen::MatrixXd dx = cand.vertices - mesh.vertices;
      Eigen::MatrixXd dg = new_grad - grad;
      double dxdg = (dx.array() * dg.array()).sum();
      double dgdg = dg.squaredNorm();
      step = (dxdg > 0 && dgdg > 0) ? std::clamp(dxdg / dgdg, 1e-10, 10.0) : trial * 2.0;

      stall = (obj - cand_obj <= 1e-11 * std::max(1.0, std::abs(obj))) ? stall + 1 : 0;
      mesh.vertices.swap(cand.vertices);
      obj = cand_obj;
      grad.swap(new_grad);

      TraceRow row;
      row.outer = outer;
      row.iter = iter;
      row.mu = mu;
      row.objective = obj;
      row.area = mesh_area(mesh);
      row.residual = mesh_isotropy_residual(mesh);
      row.grad_norm = grad.cwiseAbs().maxCoeff();
      report.trace.push_back(row);
    }

    double residual = mesh_isotropy_residual(mesh);
    if (residual <= schedule.residual_target && grad_converged) break;
    mu *= schedule.mu_growth;
  }

  // Final restoration: only from configurations already near the constraint
  // set (projection from far away is meaningless for disk topology, where
  // the set is empty).
  bool feasible = false;
  if (schedule.final_projection && mesh_isotropy_residual(mesh) <= 1e-2)
    feasible = project_isotropic(mesh, fixed) <= 1e-10;

  // Tangent polish: the penalty phase parks the iterate near the constraint
  // set but descends slowly along it. Take area-descent steps in the
  // constraint null space, restoring exact isotropy after each accepted
  // step. Cheap and monotone in area.
  if (feasible && schedule.polish_budget > 0) {
    double area_now = mesh_area(mesh);
    double step = 1e-2;
    Eigen::VectorXd c;
    Eigen::SparseMatrix<double> jac;
    TriMesh cand2 = mesh;
    for (int it = 0; it < schedule.polish_budget; ++it) {
      Eigen::MatrixXd g = objective_gradient(mesh, 0.0, fixed);
      Eigen::VectorXd gv = Eigen::Map<Eigen::VectorXd>(g.data(), g.size());
      isotropy_system(mesh, fixed, c, jac, -1.0);
      Eigen::VectorXd y = normal_solve(jac, jac * gv, 1e-10);
      Eigen::VectorXd gt = gv - jac.transpose() * y;
      double gnorm = gt.lpNorm<Eigen::Infinity>();
      if (gnorm <= schedule.grad_tol) break;

      double g2 = gt.squaredNorm();
      bool accepted = false;
      double trial = step;
      double cand_area = 0.0;
      for (int bt = 0; bt < 40; ++bt) {
        Eigen::Map<Eigen::VectorXd>(cand2.vertices.data(), cand2.vertices.size()) =
            Eigen::Map<const Eigen::VectorXd>(mesh.vertices.data(), mesh.vertices.size()) -
            trial * gt;
        project_isotropic(cand2, fixed, 10, 1e-12);
        cand_area = mesh_area(cand2);
        if (cand_area <= area_now - 1e-4 * trial * g2 && min_face_area(cand2) > kMinFaceArea) {
          accepted = true;
          break;
        }
        trial *= 0.5;
      }
      if (!accepted) break;
      mesh.vertices.swap(cand2.vertices);
      area_now = cand_area;
      step = std::min(trial * 2.0, 1.0);

      TraceRow row;
      row.outer = -1;
      row.iter = it;
      row.mu = 0.0;
      row.objective = area_now;
      row.area = area_now;
      row.residual = mesh_isotropy_residual(mesh);
      row.grad_norm = gnorm;
      report.trace.push_back(row);
    }
  }

  report.final_area = mesh_area(mesh);
  report.final_residual = mesh_isotropy_residual(mesh);
  report.area_over_pi = report.final_area / boundary_area;
  report.converged = report.final_residual <= schedule.residual_target && grad_converged;
  report.mesh = std::move(mesh);

  // Lemma-level sanity: a Lagrangian filling of a circle in the complex
  // line can never undercut 3x the disk area (2% mesh allowance).
  if (problem.plane_a >= 1.0 && problem.n == 2 && report.converged &&
      report.final_area < 3.0 * boundary_area * 0.98) {
    std::ostringstream msg;
    msg << "minimize: converged area " << report.final_area
        << " violates the proved lower bound " << 3.0 * boundary_area * 0.98;
    throw std::logic_error(msg.str());
  }
  return report;
}

LambdaTable estimate_lambda(int n, double plane_a, const OptSchedule& schedule,
                            const std::vector<std::pair<int, int>>& resolutions, double radius,
                            RandomSeed seed) {
  LambdaTable table;
  if (plane_a >= 1.0) table.proved_lower = (n == 2) ? 3.0 : 2.0;

  double best = std::numeric_limits<double>::infinity();
  for (auto [rt, rs] : resolutions) {
    IsotropicOptProblem problem =
        make_circle_problem(plane_a, radius, IsotropicOptProblem::Topology::mobius, rt, n);
    OptReport rep = minimize(problem, schedule, rt, rs, seed);
    LambdaRow row;
    row.res_t = rt;
    row.res_s = rs;
    row.area_ratio = rep.area_over_pi;
    row.residual = rep.final_residual;
    row.converged = rep.converged;
    if (rep.converged) best = std::min(best, rep.area_over_pi);
    table.rows.push_back(row);
  }
  table.observed_upper = best;
  return table;
}

}  // namespace isoarea
