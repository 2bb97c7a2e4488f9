#include "isoarea/lagrangian.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace isoarea {

namespace {

using C = std::complex<double>;

C dz(const RealVector& v, int k) { return {v[2 * k], v[2 * k + 1]}; }

// dz1 ^ dz2 evaluated on the tangent pair.
C two_form(const RealVector& ft, const RealVector& fs) {
  return dz(ft, 0) * dz(fs, 1) - dz(fs, 0) * dz(ft, 1);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
  return x;
}

double unwrap_to(double theta, double ref) {
  while (theta - ref > M_PI) theta -= 2 * M_PI;
  while (theta - ref < -M_PI) theta += 2 * M_PI;
  return theta;
}

}  // namespace

AngleGrid lagrangian_angle(const ParamSurface& surf, int nt, int ns) {
  if (surf.n != 2)
    throw std::invalid_argument("lagrangian_angle: defined only for surfaces in C^2");
  if (nt < 2 || ns < 2) throw std::invalid_argument("lagrangian_angle: grid too small");

  double resid = isotropy_residual(surf, QuadratureSpec{nt, ns});
  if (resid > 1e-8) {
    std::ostringstream msg;
    msg << "lagrangian_angle: surface not Lagrangian (isotropy residual " << resid << ")";
    throw std::invalid_argument(msg.str());
  }

  AngleGrid grid;
  grid.t = linspace(surf.t0, surf.t1, nt);
  grid.s = linspace(surf.s0, surf.s1, ns);
  grid.theta.resize(nt, ns);

  Eigen::MatrixXd raw(nt, ns);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < ns; ++j) {
      auto [ft, fs] = derivatives(surf, grid.t[i], grid.s[j]);
      C w = two_form(ft, fs);
      Metric m = first_fundamental_form(surf, grid.t[i], grid.s[j]);
      double vol = std::sqrt(std::max(m.E * m.G - m.F * m.F, 0.0));
      if (vol < 1e-14) {
        std::ostringstream msg;
        msg << "lagrangian_angle: vanishing area element at t=" << grid.t[i]
            << " s=" << grid.s[j];
        throw std::runtime_error(msg.str());
      }
      if (std::abs(std::abs(w) - vol) > 1e-8 * std::max(1.0, vol)) {
        std::ostringstream msg;
        msg << "lagrangian_angle: |dz1^dz2| deviates from the area form at t=" << grid.t[i]
            << " s=" << grid.s[j] << " (" << std::abs(w) << " vs " << vol << ")";
        throw std::runtime_error(msg.str());
      }
      raw(i, j) = std::arg(w);
    }

  grid.base_value = raw(0, 0);
  // Unwrap the first row along t, then every column along s.
  grid.theta(0, 0) = raw(0, 0);
  for (int i = 1; i < nt; ++i) grid.theta(i, 0) = unwrap_to(raw(i, 0), grid.theta(i - 1, 0));
  for (int j = 1; j < ns; ++j)
    for (int i = 0; i < nt; ++i) grid.theta(i, j) = unwrap_to(raw(i, j), grid.theta(i, j - 1));

  for (int i = 1; i < nt; ++i)
    for (int j = 0; j < ns; ++j)
      if (std::abs(grid.theta(i, j) - grid.theta(i - 1, j)) > M_PI / 2)
        throw std::runtime_error(
            "lagrangian_angle: branch jump exceeds pi/2; refine the grid");
  return grid;
}

namespace {

// d/dx of a grid row/column: central inside, one-sided at the ends.
double grid_derivative(const Eigen::MatrixXd& f, const std::vector<double>& x, int i, int j,
                       bool along_rows) {
  int n = along_rows ? static_cast<int>(f.rows()) : static_cast<int>(f.cols());
  int k = along_rows ? i : j;
  auto at = [&](int m) { return along_rows ? f(m, j) : f(i, m); };
  double h = x[1] - x[0];
  if (k == 0) return (at(1) - at(0)) / h;
  if (k == n - 1) return (at(n - 1) - at(n - 2)) / h;
  return (at(k + 1) - at(k - 1)) / (2 * h);
}

}  // namespace

OneFormGrid mean_curvature_form(const ParamSurface& surf, int nt, int ns) {
  AngleGrid angle = lagrangian_angle(surf, nt, ns);
  OneFormGrid sigma;
  sigma.t = angle.t;
  sigma.s = angle.s;
  sigma.comp_t.resize(nt, ns);
  sigma.comp_s.resize(nt, ns);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < ns; ++j) {
      sigma.comp_t(i, j) = grid_derivative(angle.theta, angle.t, i, j, true);
      sigma.comp_s(i, j) = grid_derivative(angle.theta, angle.s, i, j, false);
    }
  return sigma;
}

OneFormGrid hodge_star(const ParamSurface& surf, const OneFormGrid& form) {
  OneFormGrid star;
  star.t = form.t;
  star.s = form.s;
  const int nt = static_cast<int>(form.t.size()), ns = static_cast<int>(form.s.size());
  star.comp_t.resize(nt, ns);
  star.comp_s.resize(nt, ns);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < ns; ++j) {
      Metric m = first_fundamental_form(surf, form.t[i], form.s[j]);
      double det = m.E * m.G - m.F * m.F;
      if (det <= 1e-14)
        throw std::runtime_error("hodge_star: degenerate metric at a grid node");
      double root = std::sqrt(det);
      double p = form.comp_t(i, j), q = form.comp_s(i, j);
      star.comp_t(i, j) = (p * m.F - q * m.E) / root;
      star.comp_s(i, j) = (p * m.G - q * m.F) / root;
    }
  return star;
}

double hamiltonian_stationary_residual(const ParamSurface& surf, int nt, int ns) {
  OneFormGrid sigma = mean_curvature_form(surf, nt, ns);
  OneFormGrid star = hodge_star(surf, sigma);
  double worst = 0.0;
  for (int i = 1; i + 1 < nt; ++i)
    for (int j = 1; j + 1 < ns; ++j) {
      double d_t = grid_derivative(star.comp_s, star.t, i, j, true);
      double d_s = grid_derivative(star.comp_t, star.s, i, j, false);
      worst = std::max(worst, std::abs(d_t - d_s));
    }
  return worst;
}

}  // namespace isoarea
