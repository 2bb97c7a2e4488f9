#pragma once

#include <functional>
#include <utility>

#include "isoarea/ambient.hpp"
#include "isoarea/quadrature.hpp"

namespace isoarea {

enum class EdgeIdentification { none, cylinder, mobius };

// A smooth map from a parameter rectangle into R^2n, with optional analytic
// jacobian. The cylinder identification glues t0 = t1; the mobius one
// additionally glues (t, s1) with (t + (t1-t0)/2, s1).
struct ParamSurface {
  std::function<RealVector(double, double)> map;
  std::function<std::pair<RealVector, RealVector>(double, double)> jacobian;  // may be null
  double t0 = 0, t1 = 1, s0 = 0, s1 = 1;
  EdgeIdentification identification = EdgeIdentification::none;
  int n = 0;

  bool has_analytic_jacobian() const { return static_cast<bool>(jacobian); }
};

struct QuadratureSpec {
  int nodes_t = 64;
  int nodes_s = 64;
};

struct Metric {
  double E, F, G;
};

// (F_t, F_s): analytic jacobian when attached, otherwise central finite
// differences with step 1e-6 * extent (one-sided at the domain boundary).
std::pair<RealVector, RealVector> derivatives(const ParamSurface& surf, double t, double s);

// E = F_t.F_t, F = F_t.F_s, G = F_s.F_s.
Metric first_fundamental_form(const ParamSurface& surf, double t, double s);

// Tensor Gauss-Legendre quadrature of sqrt(EG - F^2).
double area(const ParamSurface& surf, const QuadratureSpec& quad);
double area_serial(const ParamSurface& surf, const QuadratureSpec& quad);

// max |omega(F_t, F_s)| over the tensor grid nodes.
double isotropy_residual(const ParamSurface& surf, const QuadratureSpec& grid);
double isotropy_residual_serial(const ParamSurface& surf, const QuadratureSpec& grid);

// Checks |F(t0,s)-F(t1,s)| (and the mobius half-period gluing) on sampled
// parameter values; throws if a declared identification fails by > 1e-10.
void validate_identifications(const ParamSurface& surf, int samples = 64);

// Image of the surface under v -> U v + shift. Area and isotropy residual
// are invariant under this.
ParamSurface transformed(const ParamSurface& surf, const UnitaryMatrix& u,
                         const RealVector& shift);

// Image under v -> c v; multiplies area by c^2.
ParamSurface scaled(const ParamSurface& surf, double c);

}  // namespace isoarea
