#pragma once

#include <functional>

#include "isoarea/surface.hpp"

namespace isoarea {

// Two closed curves feeding the cos/sin band construction: alpha in a plane
// P, beta in an omega-orthogonal plane P', with matching symplectic speeds
// omega(alpha, alpha') = omega(beta, beta'). When beta has half-period
// symmetry beta(t) = beta(t + period/2), the band closes up as a Mobius
// strip; otherwise as a cylinder.
struct CurvePair {
  std::function<RealVector(double)> alpha;
  std::function<RealVector(double)> beta;
  std::function<RealVector(double)> alpha_dot;  // optional
  std::function<RealVector(double)> beta_dot;   // optional
  double period = 2 * M_PI;
  bool half_period_symmetry = true;
};

// F(t, s) = cos(s) alpha(t) + sin(s) beta(t) on [0, period] x [0, pi/2].
// Validates plane membership, omega-orthogonality of P and P', and the
// curve compatibility condition by dense sampling; an isotropic surface
// comes out whenever the inputs qualify.
ParamSurface band_from_curves(const CurvePair& pair, const TwoPlane& P,
                              const TwoPlane& P_prime, int validation_samples = 512);

// The Hamiltonian stationary band over the unit circle in the complex line
// C^1 x {0}: alpha(t) = (e^{it}, 0), beta(t) = (0, e^{2it}/sqrt(2)),
// embedded in C^n with analytic jacobian. Area = 3 pi^2 / (2 sqrt(2)).
ParamSurface complex_band(int n);

// The band over the unit circle in the non-complex plane P_a,
// 0 <= a < 1. Strictly smaller area than the complex band's.
ParamSurface noncomplex_band(double a, int n);

// (1 + sin^2 s)/sqrt(2) - sin(2s) sin(3t) sqrt(1-a^2): the pointwise upper
// bound for the non-complex band's area element. Its integral over the
// parameter domain is exactly 3 pi^2 / (2 sqrt(2)).
double band_area_bound_integrand(double a, double t, double s);

}  // namespace isoarea
