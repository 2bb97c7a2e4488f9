#pragma once

#include <optional>
#include <vector>

#include "isoarea/rng.hpp"
#include "isoarea/trimesh.hpp"

namespace isoarea {

// Affine complex hyperplane {x : x.normal = c1, x.(J normal) = c2}; the
// zero set is J-invariant by construction. For n = 2 this is a complex
// line in R^4.
struct ComplexHyperplane {
  RealVector normal;  // unit
  double c1 = 0.0, c2 = 0.0;
};

// Monte-Carlo estimate with its standard error; errors are reported, never
// hidden.
struct McEstimate {
  double mean = 0.0;
  double stderror = 0.0;
  long long samples = 0;
};

// One integrand evaluation of the Haar-averaged angle: the wedge norm of
// {e1(p), e2(p), U v1, ..., U v_{2n-2}} for an orthonormal frame of a
// complex hyperplane through the origin.
double angle_sample(const TwoPlane& p, const std::vector<RealVector>& q_frame,
                    const UnitaryMatrix& u);

// Haar average of angle_sample over U(n). Depends only on the U(n)-orbit
// of p. Deterministic for a fixed seed, independent of thread count.
McEstimate average_angle(const TwoPlane& p, int n, long long samples, RandomSeed seed);
McEstimate average_angle_serial(const TwoPlane& p, int n, long long samples, RandomSeed seed);

struct AngleRatio {
  McEstimate complex_angle;    // I_C
  McEstimate isotropic_angle;  // I_L
  double ratio = 0.0;          // I_C / I_L, expected 2
  double stderror = 0.0;
};

// I_C / I_L for the standard complex and isotropic planes in C^n.
AngleRatio angle_ratio(int n, long long samples, RandomSeed seed);

struct HyperplaneCount {
  int count = 0;
  bool tangent = false;  // a face was parallel to the hyperplane; resample
};

// Transversal intersection count of a complex line with a 2-mesh in C^2.
// Boundary-of-face hits are counted once (owner-face convention).
HyperplaneCount hyperplane_mesh_intersections(const TriMesh& mesh, const ComplexHyperplane& eta);

// Translation window for the non-compact part of the isometry group:
// rotations Haar on U(n), translations uniform in B(center, radius).
struct CroftonWindow {
  RealVector center;
  double radius = 0.0;
};

// (window volume) x mean of #(P cap gQ) over g = (Haar U, uniform
// translation). Requires the window to contain every translate for which
// the moving mesh can touch P; throws otherwise.
McEstimate howard_lhs_estimate(const TriMesh& P, const TriMesh& Q, const CroftonWindow& window,
                               long long samples, RandomSeed seed);
McEstimate howard_lhs_estimate_serial(const TriMesh& P, const TriMesh& Q,
                                      const CroftonWindow& window, long long samples,
                                      RandomSeed seed);

// A complex line through the origin of C^2, kappa = C . direction.
struct LineThroughOrigin {
  RealVector direction;  // unit, in R^4

  explicit LineThroughOrigin(RealVector d);
};

// The perpendicular complex line kappa^perp.
LineThroughOrigin orthogonal_line(const LineThroughOrigin& kappa);

// cos^2 of the angle between kappa and the first coordinate line C^1.
double cos2_alpha(const LineThroughOrigin& kappa);

// Haar/Fubini-Study uniform line (projection of a uniform point on S^3).
LineThroughOrigin sample_line(Rng& rng);

// rho_kappa(u, v): signed area, in kappa, of the projections of u and v.
// Kernel is kappa^perp; rho_kappa + rho_{kappa^perp} = omega.
double rho_form(const LineThroughOrigin& kappa, const RealVector& u, const RealVector& v);

// F(P, kappa) = sum over faces of |rho_kappa(e1, e2)| / 2: the area of the
// projection onto kappa counted with multiplicity.
double f_functional(const TriMesh& mesh, const LineThroughOrigin& kappa);
double f_functional_serial(const TriMesh& mesh, const LineThroughOrigin& kappa);

// Fubini-Study integrals in the affine chart, by radial-angular quadrature
// with the r = tan(phi/2) substitution. Exact values: Num_C = pi,
// Num_L = 3 pi / 2.
struct NumIntegrals {
  double num_c = 0.0;
  double num_l = 0.0;
};
NumIntegrals num_integrals(int radial_nodes);

// Empirical verification of the 3:1 area mechanism for a Lagrangian mesh S
// spanning the same boundary as a flat disk D in C^1. Reports per-kappa
// margins and the implied lower bound on Area(S)/Area(D); it certifies the
// sampled inequalities, it does not prove anything.
struct CertificateReport {
  double implied_ratio_bound = 0.0;  // expected >= 3 up to sampling error
  double area_ratio = 0.0;           // actual Area(S)/Area(D)
  double min_monotonicity_margin = 0.0;  // min over kappa of F(S,k)-F(D,k)
  double max_symmetry_residual = 0.0;    // max |F(S,k)-F(S,k_perp)|
  double min_comass_margin = 0.0;        // min of Area(S)-F(S,k)
  long long kappa_samples = 0;
};
CertificateReport lagrangian_lower_bound_certificate(const TriMesh& S, const TriMesh& D,
                                                     long long kappas, RandomSeed seed);

}  // namespace isoarea
