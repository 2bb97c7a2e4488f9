#include "isoarea/surface.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "isoarea/parallel.hpp"

namespace isoarea {

std::pair<RealVector, RealVector> derivatives(const ParamSurface& surf, double t, double s) {
  const double tol_t = 1e-9 * (surf.t1 - surf.t0), tol_s = 1e-9 * (surf.s1 - surf.s0);
  if (t < surf.t0 - tol_t || t > surf.t1 + tol_t || s < surf.s0 - tol_s || s > surf.s1 + tol_s) {
    std::ostringstream msg;
    msg << "derivatives: (" << t << ", " << s << ") outside parameter domain";
    throw std::invalid_argument(msg.str());
  }
  if (surf.jacobian) return surf.jacobian(t, s);

  const double ht = 1e-6 * (surf.t1 - surf.t0);
  const double hs = 1e-6 * (surf.s1 - surf.s0);

  auto diff = [&](bool along_t, double step) {
    double lo = along_t ? surf.t0 : surf.s0;
    double hi = along_t ? surf.t1 : surf.s1;
    double x = along_t ? t : s;
    double a = x - step, b = x + step;
    if (a < lo) a = x;       // one-sided at the boundary
    if (b > hi) b = x;
    RealVector fa = along_t ? surf.map(a, s) : surf.map(t, a);
    RealVector fb = along_t ? surf.map(b, s) : surf.map(t, b);
    return RealVector((fb - fa) / (b - a));
  };

  return {diff(true, ht), diff(false, hs)};
}

Metric first_fundamental_form(const ParamSurface& surf, double t, double s) {
  auto [ft, fs] = derivatives(surf, t, s);
  return Metric{ft.dot(ft), ft.dot(fs), fs.dot(fs)};
}

namespace {

// Fills the weighted integrand values over the tensor grid; summation order
// is owned by the caller.
template <typename NodeFn>
void for_each_node(const ParamSurface& surf, const QuadratureSpec& quad, NodeFn&& fn) {
  GaussRule rt = gauss_legendre(quad.nodes_t, surf.t0, surf.t1);
  GaussRule rs = gauss_legendre(quad.nodes_s, surf.s0, surf.s1);
  for (int i = 0; i < quad.nodes_t; ++i)
    for (int j = 0; j < quad.nodes_s; ++j)
      fn(i, j, rt.nodes[i], rs.nodes[j], rt.weights[i] * rs.weights[j]);
}

double area_element(const ParamSurface& surf, double t, double s) {
  Metric m = first_fundamental_form(surf, t, s);
  double g = m.E * m.G - m.F * m.F;
  return g > 0.0 ? std::sqrt(g) : 0.0;
}

void check_finite(const std::vector<double>& vals, const ParamSurface& surf,
                  const QuadratureSpec& quad) {
  GaussRule rt = gauss_legendre(quad.nodes_t, surf.t0, surf.t1);
  GaussRule rs = gauss_legendre(quad.nodes_s, surf.s0, surf.s1);
  for (int i = 0; i < quad.nodes_t; ++i)
    for (int j = 0; j < quad.nodes_s; ++j)
      if (!std::isfinite(vals[static_cast<std::size_t>(i) * quad.nodes_s + j])) {
        std::ostringstream msg;
        msg << "area: non-finite integrand at node (" << i << ", " << j << "), t="
            << rt.nodes[i] << " s=" << rs.nodes[j];
        throw std::runtime_error(msg.str());
      }
}

}  // namespace

double area(const ParamSurface& surf, const QuadratureSpec& quad) {
  GaussRule rt = gauss_legendre(quad.nodes_t, surf.t0, surf.t1);
  GaussRule rs = gauss_legendre(quad.nodes_s, surf.s0, surf.s1);
  std::vector<double> vals(static_cast<std::size_t>(quad.nodes_t) * quad.nodes_s);
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (int i = 0; i < quad.nodes_t; ++i)
    for (int j = 0; j < quad.nodes_s; ++j)
      vals[static_cast<std::size_t>(i) * quad.nodes_s + j] =
          rt.weights[i] * rs.weights[j] * area_element(surf, rt.nodes[i], rs.nodes[j]);
  check_finite(vals, surf, quad);
  return pairwise_sum(vals);
}

double area_serial(const ParamSurface& surf, const QuadratureSpec& quad) {
  std::vector<double> vals(static_cast<std::size_t>(quad.nodes_t) * quad.nodes_s);
  for_each_node(surf, quad, [&](int i, int j, double t, double s, double w) {
    vals[static_cast<std::size_t>(i) * quad.nodes_s + j] = w * area_element(surf, t, s);
  });
  check_finite(vals, surf, quad);
  return pairwise_sum(vals);
}

double isotropy_residual(const ParamSurface& surf, const QuadratureSpec& grid) {
  GaussRule rt = gauss_legendre(grid.nodes_t, surf.t0, surf.t1);
  GaussRule rs = gauss_legendre(grid.nodes_s, surf.s0, surf.s1);
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst) num_threads(max_threads())
  for (int i = 0; i < grid.nodes_t; ++i)
    for (int j = 0; j < grid.nodes_s; ++j) {
      auto [ft, fs] = derivatives(surf, rt.nodes[i], rs.nodes[j]);
      double w = std::abs(symplectic_form(ft, fs));
      if (w > worst) worst = w;
    }
  return worst;
}

double isotropy_residual_serial(const ParamSurface& surf, const QuadratureSpec& grid) {
  double worst = 0.0;
  for_each_node(surf, grid, [&](int, int, double t, double s, double) {
    auto [ft, fs] = derivatives(surf, t, s);
    worst = std::max(worst, std::abs(symplectic_form(ft, fs)));
  });
  return worst;
}

void validate_identifications(const ParamSurface& surf, int samples) {
  if (surf.identification == EdgeIdentification::none) return;
  const double period = surf.t1 - surf.t0;
  for (int i = 0; i < samples; ++i) {
    double s = surf.s0 + (surf.s1 - surf.s0) * (i + 0.5) / samples;
    if ((surf.map(surf.t0, s) - surf.map(surf.t1, s)).norm() > 1e-10)
      throw std::invalid_argument("surface: t-periodicity violated beyond 1e-10");
  }
  if (surf.identification == EdgeIdentification::mobius) {
    for (int i = 0; i < samples; ++i) {
      double t = surf.t0 + period * (i + 0.5) / samples;
      double tt = t + 0.5 * period;
      if (tt > surf.t1) tt -= period;
      if ((surf.map(t, surf.s1) - surf.map(tt, surf.s1)).norm() > 1e-10)
        throw std::invalid_argument("surface: mobius half-period gluing violated beyond 1e-10");
    }
  }
}

ParamSurface transformed(const ParamSurface& surf, const UnitaryMatrix& u,
                         const RealVector& shift) {
  ParamSurface out = surf;
  auto base_map = surf.map;
  Eigen::MatrixXd m = u.real;
  RealVector c = shift;
  out.map = [base_map, m, c](double t, double s) { return RealVector(m * base_map(t, s) + c); };
  if (surf.jacobian) {
    auto base_jac = surf.jacobian;
    out.jacobian = [base_jac, m](double t, double s) {
      auto [ft, fs] = base_jac(t, s);
      return std::make_pair(RealVector(m * ft), RealVector(m * fs));
    };
  }
  return out;
}

ParamSurface scaled(const ParamSurface& surf, double c) {
  ParamSurface out = surf;
  auto base_map = surf.map;
  out.map = [base_map, c](double t, double s) { return RealVector(c * base_map(t, s)); };
  if (surf.jacobian) {
    auto base_jac = surf.jacobian;
    out.jacobian = [base_jac, c](double t, double s) {
      auto [ft, fs] = base_jac(t, s);
      return std::make_pair(RealVector(c * ft), RealVector(c * fs));
    };
  }
  return out;
}

}  // namespace isoarea
