#include "isoarea/crofton.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "isoarea/parallel.hpp"
#include "isoarea/quadrature.hpp"

namespace isoarea {

namespace {

constexpr long long kChunk = 8192;

struct MomentSums {
  double sum = 0.0, sum_sq = 0.0;
};

// Runs fn(rng, chunk_sums) over sample chunks with one substream per chunk;
// the reduction is a fixed pairwise tree, so the estimate is identical for
// any thread count (and for the serial driver).
template <typename ChunkFn>
McEstimate chunked_mc(long long samples, RandomSeed seed, bool parallel, ChunkFn&& fn) {
  const long long chunks = (samples + kChunk - 1) / kChunk;
  std::vector<double> sums(chunks), sums_sq(chunks);

#pragma omp parallel for schedule(dynamic) num_threads(max_threads()) if (parallel)
  for (long long c = 0; c < chunks; ++c) {
    long long count = std::min(kChunk, samples - c * kChunk);
    Rng rng(seed.substream(static_cast<std::uint64_t>(c) + 1));
    MomentSums m;
    fn(rng, count, m);
    sums[c] = m.sum;
    sums_sq[c] = m.sum_sq;
  }

  double total = pairwise_sum(sums);
  double total_sq = pairwise_sum(sums_sq);
  McEstimate est;
  est.samples = samples;
  est.mean = total / samples;
  double var = std::max(total_sq / samples - est.mean * est.mean, 0.0);
  est.stderror = std::sqrt(var / std::max<long long>(samples - 1, 1));
  return est;
}

void check_frame_orthonormal(const std::vector<RealVector>& frame) {
  for (std::size_t i = 0; i < frame.size(); ++i)
    for (std::size_t j = i; j < frame.size(); ++j) {
      double want = i == j ? 1.0 : 0.0;
      if (std::abs(frame[i].dot(frame[j]) - want) > 1e-12)
        throw std::invalid_argument("angle frame not orthonormal within 1e-12");
    }
}

double angle_kernel(const TwoPlane& p, const Eigen::MatrixXd& q_cols, const UnitaryMatrix& u,
                    Eigen::MatrixXd& work) {
  work.col(0) = p.e1;
  work.col(1) = p.e2;
  work.rightCols(q_cols.cols()).noalias() = u.real * q_cols;
  return std::abs(work.determinant());
}

Eigen::MatrixXd frame_matrix(const std::vector<RealVector>& frame, Eigen::Index dim) {
  Eigen::MatrixXd m(dim, static_cast<Eigen::Index>(frame.size()));
  for (std::size_t j = 0; j < frame.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = frame[j];
  return m;
}

// Orthonormal frame of the complex hyperplane z_1 = 0: the axes of the
// remaining n-1 complex coordinates.
std::vector<RealVector> standard_hyperplane_frame(int n) {
  std::vector<RealVector> frame;
  for (int k = 1; k < n; ++k) {
    frame.push_back(axis_vector(n, k, false));
    frame.push_back(axis_vector(n, k, true));
  }
  return frame;
}

McEstimate average_angle_impl(const TwoPlane& p, int n, long long samples, RandomSeed seed,
                              bool parallel) {
  if (p.n != n) throw std::invalid_argument("average_angle: plane/ambient dimension mismatch");
  if (samples < 1000) throw std::invalid_argument("average_angle: need at least 1e3 samples");
  Eigen::MatrixXd q_cols = frame_matrix(standard_hyperplane_frame(n), 2 * n);

  return chunked_mc(samples, seed, parallel, [&](Rng& rng, long long count, MomentSums& m) {
    Eigen::MatrixXd work(2 * n, 2 * n);
    for (long long i = 0; i < count; ++i) {
      UnitaryMatrix u = haar_unitary(n, rng);
      double v = angle_kernel(p, q_cols, u, work);
      m.sum += v;
      m.sum_sq += v * v;
    }
  });
}

}  // namespace

double angle_sample(const TwoPlane& p, const std::vector<RealVector>& q_frame,
                    const UnitaryMatrix& u) {
  if (static_cast<int>(q_frame.size()) != 2 * p.n - 2)
    throw std::invalid_argument("angle_sample: frame must span a complex hyperplane (2n-2 vectors)");
  check_frame_orthonormal(q_frame);
  std::vector<RealVector> vecs{p.e1, p.e2};
  for (const auto& v : q_frame) vecs.push_back(u.apply(v));
  return wedge_norm(vecs);
}

McEstimate average_angle(const TwoPlane& p, int n, long long samples, RandomSeed seed) {
  return average_angle_impl(p, n, samples, seed, true);
}

McEstimate average_angle_serial(const TwoPlane& p, int n, long long samples, RandomSeed seed) {
  return average_angle_impl(p, n, samples, seed, false);
}

AngleRatio angle_ratio(int n, long long samples, RandomSeed seed) {
  if (n < 2) throw std::invalid_argument("angle_ratio: need n >= 2");
  TwoPlane complex_plane(axis_vector(n, 0, false), axis_vector(n, 0, true));
  TwoPlane isotropic_plane(axis_vector(n, 0, false), axis_vector(n, 1, false));

  AngleRatio out;
  out.complex_angle = average_angle(complex_plane, n, samples, seed);
  out.isotropic_angle = average_angle(isotropic_plane, n, samples, seed.substream(1u << 20));
  out.ratio = out.complex_angle.mean / out.isotropic_angle.mean;
  double rc = out.complex_angle.stderror / out.complex_angle.mean;
  double ri = out.isotropic_angle.stderror / out.isotropic_angle.mean;
  out.stderror = out.ratio * std::sqrt(rc * rc + ri * ri);
  return out;
}

HyperplaneCount hyperplane_mesh_intersections(const TriMesh& mesh, const ComplexHyperplane& eta) {
  if (mesh.n != 2)
    throw std::invalid_argument("hyperplane_mesh_intersections: supported only in C^2");
  const RealVector jn = apply_complex_structure(eta.normal);

  auto phi = [&](const Eigen::Ref<const Eigen::VectorXd>& x) {
    return Eigen::Vector2d(x.dot(eta.normal) - eta.c1, x.dot(jn) - eta.c2);
  };

  HyperplaneCount out;
  std::vector<RealVector> boundary_points;
  const double eps = 1e-12;

  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto& tri = mesh.faces[f];
    Eigen::Vector2d pa = phi(mesh.vertices.col(tri[0]));
    Eigen::Vector2d pb = phi(mesh.vertices.col(tri[1]));
    Eigen::Vector2d pc = phi(mesh.vertices.col(tri[2]));
    Eigen::Vector2d u = pb - pa, v = pc - pa;
    double det = u.x() * v.y() - u.y() * v.x();
    double scale = std::max(u.norm() * v.norm(), 1e-300);
    if (std::abs(det) <= 1e-12 * scale) {
      // Face parallel to the hyperplane; a transversal count is undefined,
      // the caller resamples.
      out.tangent = true;
      return out;
    }
    double l1 = (-pa.x() * v.y() + pa.y() * v.x()) / det;
    double l2 = (-u.x() * pa.y() + u.y() * pa.x()) / det;
    if (l1 < -eps || l2 < -eps || l1 + l2 > 1.0 + eps) continue;
    bool interior = l1 > eps && l2 > eps && l1 + l2 < 1.0 - eps;
    if (interior) {
      ++out.count;
    } else {
      RealVector x = mesh.vertices.col(tri[0]) +
                     l1 * (mesh.vertices.col(tri[1]) - mesh.vertices.col(tri[0])) +
                     l2 * (mesh.vertices.col(tri[2]) - mesh.vertices.col(tri[0]));
      boundary_points.push_back(x);
    }
  }

  // Hits on shared edges/vertices show up once per adjacent face; the owner
  // face convention collapses each geometric point to a single count.
  std::vector<bool> counted(boundary_points.size(), false);
  for (std::size_t i = 0; i < boundary_points.size(); ++i) {
    if (counted[i]) continue;
    ++out.count;
    for (std::size_t j = i + 1; j < boundary_points.size(); ++j)
      if (!counted[j] && (boundary_points[i] - boundary_points[j]).norm() <
                             1e-10 * (1.0 + boundary_points[i].norm()))
        counted[j] = true;
  }
  return out;
}

namespace {

struct FaceSphere {
  RealVector center;
  double radius;
};

std::vector<FaceSphere> face_spheres(const TriMesh& mesh) {
  std::vector<FaceSphere> out(mesh.faces.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& tri = mesh.faces[f];
    RealVector c =
        (mesh.vertices.col(tri[0]) + mesh.vertices.col(tri[1]) + mesh.vertices.col(tri[2])) / 3.0;
    double r = 0.0;
    for (int v : tri) r = std::max(r, (mesh.vertices.col(v) - c).norm());
    out[f] = {c, r};
  }
  return out;
}

double mesh_diameter(const TriMesh& mesh) {
  double d = 0.0;
  for (int i = 0; i < mesh.vertex_count(); ++i)
    for (int j = i + 1; j < mesh.vertex_count(); ++j)
      d = std::max(d, (mesh.vertices.col(i) - mesh.vertices.col(j)).norm());
  return d;
}

// Transversal intersection points of two triangles of complementary
// dimension in R^4: solve the 4x4 affine system in the barycentric
// parameters of both.
int tri_tri_count(const Eigen::Matrix<double, 4, 3>& t1, const Eigen::Matrix<double, 4, 3>& t2) {
  Eigen::Matrix4d m;
  m.col(0) = t1.col(1) - t1.col(0);
  m.col(1) = t1.col(2) - t1.col(0);
  m.col(2) = -(t2.col(1) - t2.col(0));
  m.col(3) = -(t2.col(2) - t2.col(0));
  Eigen::Vector4d rhs = t2.col(0) - t1.col(0);
  Eigen::PartialPivLU<Eigen::Matrix4d> lu(m);
  double det = lu.determinant();
  if (std::abs(det) < 1e-14) return 0;  // parallel configuration, measure zero
  Eigen::Vector4d x = lu.solve(rhs);
  if (x[0] < 0 || x[1] < 0 || x[0] + x[1] > 1) return 0;
  if (x[2] < 0 || x[3] < 0 || x[2] + x[3] > 1) return 0;
  return 1;
}

// Uniform point in the ball B(center, radius) in R^4 by rejection.
RealVector uniform_in_ball(Rng& rng, const RealVector& center, double radius) {
  while (true) {
    Eigen::Vector4d u(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                      rng.uniform(-1, 1));
    if (u.squaredNorm() <= 1.0) {
      RealVector out = center;
      out += radius * u;
      return out;
    }
  }
}

McEstimate howard_impl(const TriMesh& P, const TriMesh& Q, const CroftonWindow& window,
                       long long samples, RandomSeed seed, bool parallel) {
  if (P.n != 2 || Q.n != 2)
    throw std::invalid_argument("howard_lhs_estimate: supported only in C^2");
  const double diam_q = mesh_diameter(Q);
  double p_reach = 0.0;
  for (int v = 0; v < P.vertex_count(); ++v)
    p_reach = std::max(p_reach, (P.vertex(v) - window.center).norm());
  if (p_reach > window.radius - diam_q) {
    std::ostringstream msg;
    msg << "howard_lhs_estimate: window too small (need radius >= " << p_reach + diam_q << ")";
    throw std::invalid_argument(msg.str());
  }

  const auto p_spheres = face_spheres(P);
  const auto q_spheres = face_spheres(Q);
  double q_reach = 0.0;  // all of Q lies within this distance of the origin
  for (int v = 0; v < Q.vertex_count(); ++v) q_reach = std::max(q_reach, Q.vertex(v).norm());

  const double volume = 0.5 * M_PI * M_PI * std::pow(window.radius, 4);

  McEstimate est = chunked_mc(samples, seed, parallel, [&](Rng& rng, long long count,
                                                           MomentSums& m) {
    Eigen::MatrixXd qv(4, Q.vertex_count());
    std::vector<FaceSphere> qs = q_spheres;
    Eigen::Matrix<double, 4, 3> t1, t2;
    for (long long i = 0; i < count; ++i) {
      RealVector tau = uniform_in_ball(rng, window.center, window.radius);
      // Cheap rejection before the unitary draw: Q stays within q_reach of
      // tau for every rotation.
      bool possible = false;
      for (const auto& ps : p_spheres)
        if ((ps.center - tau).norm() <= ps.radius + q_reach + 1e-12) {
          possible = true;
          break;
        }
      if (!possible) continue;

      UnitaryMatrix u = haar_unitary(2, rng);
      qv.noalias() = u.real * Q.vertices;
      qv.colwise() += tau;
      for (std::size_t f = 0; f < q_spheres.size(); ++f) {
        qs[f].center = u.real * q_spheres[f].center + tau;
        qs[f].radius = q_spheres[f].radius;
      }

      int hits = 0;
      for (std::size_t fp = 0; fp < p_spheres.size(); ++fp) {
        const auto& a = P.faces[fp];
        for (std::size_t fq = 0; fq < qs.size(); ++fq) {
          double gap = (p_spheres[fp].center - qs[fq].center).norm();
          if (gap > p_spheres[fp].radius + qs[fq].radius) continue;
          t1.col(0) = P.vertices.col(a[0]);
          t1.col(1) = P.vertices.col(a[1]);
          t1.col(2) = P.vertices.col(a[2]);
          const auto& b = Q.faces[fq];
          t2.col(0) = qv.col(b[0]);
          t2.col(1) = qv.col(b[1]);
          t2.col(2) = qv.col(b[2]);
          hits += tri_tri_count(t1, t2);
        }
      }
      m.sum += hits;
      m.sum_sq += static_cast<double>(hits) * hits;
    }
  });

  est.mean *= volume;
  est.stderror *= volume;
  return est;
}

}  // namespace

McEstimate howard_lhs_estimate(const TriMesh& P, const TriMesh& Q, const CroftonWindow& window,
                               long long samples, RandomSeed seed) {
  return howard_impl(P, Q, window, samples, seed, true);
}

McEstimate howard_lhs_estimate_serial(const TriMesh& P, const TriMesh& Q,
                                      const CroftonWindow& window, long long samples,
                                      RandomSeed seed) {
  return howard_impl(P, Q, window, samples, seed, false);
}

LineThroughOrigin::LineThroughOrigin(RealVector d) : direction(std::move(d)) {
  if (direction.size() != 4)
    throw std::invalid_argument("LineThroughOrigin: expected a vector in R^4");
  double norm = direction.norm();
  if (std::abs(norm - 1.0) > 1e-12)
    throw std::invalid_argument("LineThroughOrigin: direction must be a unit vector");
}

LineThroughOrigin orthogonal_line(const LineThroughOrigin& kappa) {
  const RealVector& d = kappa.direction;
  // (d1, d2) -> (-conj(d2), conj(d1)) in complex coordinates.
  RealVector e(4);
  e[0] = -d[2];
  e[1] = d[3];
  e[2] = d[0];
  e[3] = -d[1];
  return LineThroughOrigin(e);
}

double cos2_alpha(const LineThroughOrigin& kappa) {
  return kappa.direction[0] * kappa.direction[0] + kappa.direction[1] * kappa.direction[1];
}

LineThroughOrigin sample_line(Rng& rng) {
  RealVector d(4);
  double norm = 0.0;
  do {
    for (int i = 0; i < 4; ++i) d[i] = rng.normal();
    norm = d.norm();
  } while (norm < 1e-12);
  return LineThroughOrigin(RealVector(d / norm));
}

double rho_form(const LineThroughOrigin& kappa, const RealVector& u, const RealVector& v) {
  const RealVector& d = kappa.direction;
  RealVector jd = apply_complex_structure(d);
  // Signed area of the projections in the (d, Jd) frame of kappa.
  return u.dot(d) * v.dot(jd) - u.dot(jd) * v.dot(d);
}

namespace {
double f_functional_impl(const TriMesh& mesh, const LineThroughOrigin& kappa, bool parallel) {
  if (mesh.n != 2) throw std::invalid_argument("f_functional: supported only in C^2");
  const int nf = mesh.face_count();
  std::vector<double> vals(nf);
  const RealVector& d = kappa.direction;
  const RealVector jd = apply_complex_structure(d);
#pragma omp parallel for schedule(static) num_threads(max_threads()) if (parallel)
  for (int f = 0; f < nf; ++f) {
    const auto& tri = mesh.faces[f];
    RealVector u = mesh.vertices.col(tri[1]) - mesh.vertices.col(tri[0]);
    RealVector v = mesh.vertices.col(tri[2]) - mesh.vertices.col(tri[0]);
    vals[f] = 0.5 * std::abs(u.dot(d) * v.dot(jd) - u.dot(jd) * v.dot(d));
  }
  return pairwise_sum(vals);
}
}  // namespace

double f_functional(const TriMesh& mesh, const LineThroughOrigin& kappa) {
  return f_functional_impl(mesh, kappa, true);
}

double f_functional_serial(const TriMesh& mesh, const LineThroughOrigin& kappa) {
  return f_functional_impl(mesh, kappa, false);
}

NumIntegrals num_integrals(int radial_nodes) {
  if (radial_nodes < 32) throw std::invalid_argument("num_integrals: need >= 32 radial nodes");
  // Chart z = r e^{i theta}; with r = tan(phi/2) the weighted Fubini-Study
  // density cos^2(alpha) * 2 r /(1+r^2)^2 dr becomes sin(phi/2) cos^3(phi/2) dphi.
  auto radial = [](double phi) {
    return std::sin(0.5 * phi) * std::pow(std::cos(0.5 * phi), 3);
  };

  const int angular_nodes = 64;
  GaussRule ang = gauss_legendre(angular_nodes, 0.0, 2.0 * M_PI);
  GaussRule full = gauss_legendre(radial_nodes, 0.0, M_PI);        // all of CP^1
  GaussRule half = gauss_legendre(radial_nodes, 0.0, M_PI / 2.0);  // |z| <= 1

  NumIntegrals out;
  for (int i = 0; i < angular_nodes; ++i) {
    double wa = ang.weights[i];
    for (int j = 0; j < radial_nodes; ++j) {
      out.num_c += wa * full.weights[j] * radial(full.nodes[j]);
      out.num_l += 2.0 * wa * half.weights[j] * radial(half.nodes[j]);
    }
  }
  return out;
}

CertificateReport lagrangian_lower_bound_certificate(const TriMesh& S, const TriMesh& D,
                                                     long long kappas, RandomSeed seed) {
  if (S.n != 2 || D.n != 2)
    throw std::invalid_argument("certificate: supported only in C^2");
  double s_resid = mesh_isotropy_residual(S);
  if (s_resid > 1e-3) {
    std::ostringstream msg;
    msg << "certificate: S is not Lagrangian (mesh isotropy residual " << s_resid << ")";
    throw std::invalid_argument(msg.str());
  }
  for (int v = 0; v < D.vertex_count(); ++v)
    if (std::abs(D.vertices(2, v)) > 1e-9 || std::abs(D.vertices(3, v)) > 1e-9)
      throw std::invalid_argument("certificate: D must be flat in the complex line C^1");

  // Same boundary within 1e-6 Hausdorff distance (on boundary vertex sets).
  auto hausdorff = [](const TriMesh& a, const TriMesh& b) {
    double worst = 0.0;
    for (int i : a.boundary_vertices) {
      double best = std::numeric_limits<double>::infinity();
      for (int j : b.boundary_vertices)
        best = std::min(best, (a.vertices.col(i) - b.vertices.col(j)).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  double hd = std::max(hausdorff(S, D), hausdorff(D, S));
  if (hd > 1e-6) {
    std::ostringstream msg;
    msg << "certificate: boundary mismatch (Hausdorff distance " << hd << ")";
    throw std::invalid_argument(msg.str());
  }

  const double area_s = mesh_area(S);
  const double area_d = mesh_area(D);

  std::vector<double> folded(kappas), cos2(kappas);
  double min_mono = std::numeric_limits<double>::infinity();
  double max_sym = 0.0;
  double min_comass = std::numeric_limits<double>::infinity();

#pragma omp parallel for schedule(dynamic, 16) num_threads(max_threads()) \
    reduction(min : min_mono, min_comass) reduction(max : max_sym)
  for (long long k = 0; k < kappas; ++k) {
    Rng rng(seed.substream(static_cast<std::uint64_t>(k) + 1));
    LineThroughOrigin kappa = sample_line(rng);
    LineThroughOrigin perp = orthogonal_line(kappa);
    double fs = f_functional_serial(S, kappa);
    double fs_perp = f_functional_serial(S, perp);
    double fd = f_functional_serial(D, kappa);
    double c2 = cos2_alpha(kappa);
    double f_sym = 0.5 * (fs + fs_perp);
    folded[k] = (c2 >= 0.5 ? 2.0 * f_sym : 0.0);  // alpha <= pi/4 <=> cos^2 >= 1/2
    cos2[k] = c2;
    min_mono = std::min(min_mono, fs - fd);
    max_sym = std::max(max_sym, std::abs(fs - fs_perp));
    min_comass = std::min(min_comass, area_s - fs);
  }

  CertificateReport report;
  report.kappa_samples = kappas;
  report.area_ratio = area_s / area_d;
  report.min_monotonicity_margin = min_mono;
  report.max_symmetry_residual = max_sym;
  report.min_comass_margin = min_comass;
  double mean_folded = pairwise_sum(folded) / static_cast<double>(kappas);
  double mean_cos2 = pairwise_sum(cos2) / static_cast<double>(kappas);
  // Area(S)/Area(D) >= (I_C/I_L) * E[2 1_{alpha<=pi/4} F(S,kappa)] /
  // (E[cos^2 alpha] Area(D)); the angle ratio I_C/I_L = 2.
  report.implied_ratio_bound = 2.0 * mean_folded / (mean_cos2 * area_d);
  return report;
}

}  // namespace isoarea
