#pragma once

#include "isoarea/surface.hpp"

namespace isoarea {

// Lagrangian angle theta on a uniform (t, s) grid, branch-unwrapped from the
// grid origin. Defined through dz1 ^ dz2 |_F = e^{i theta} vol(F), so it
// requires n = 2 and an isotropic surface.
struct AngleGrid {
  Eigen::MatrixXd theta;     // nt x ns, unwrapped
  std::vector<double> t, s;  // node coordinates
  double base_value = 0.0;   // principal-branch value at (t[0], s[0])
};

// 1-form on the same grid, components in the (dt, ds) coframe.
struct OneFormGrid {
  Eigen::MatrixXd comp_t, comp_s;  // nt x ns
  std::vector<double> t, s;
};

// Evaluates dz1^dz2(F_t, F_s) nodewise, takes arguments, and unwraps the
// branch row-major from the base node. Throws if the surface is not
// Lagrangian (isotropy residual > 1e-8), if the area element vanishes at a
// node, or if a branch jump exceeds pi/2 between neighbors.
AngleGrid lagrangian_angle(const ParamSurface& surf, int nt, int ns);

// sigma = d theta by central differences on the unwrapped grid (one-sided
// at the grid edge).
OneFormGrid mean_curvature_form(const ParamSurface& surf, int nt, int ns);

// Hodge star in the metric of surf, orientation dt ^ ds:
// (*w)_t = (p F - q E)/sqrt(EG - F^2), (*w)_s = (p G - q F)/sqrt(EG - F^2)
// for w = p dt + q ds.
OneFormGrid hodge_star(const ParamSurface& surf, const OneFormGrid& form);

// max over interior nodes of |d(*sigma)| = |d_t (*sigma)_s - d_s (*sigma)_t|.
// Zero (to scheme error) exactly when the surface is Hamiltonian stationary.
double hamiltonian_stationary_residual(const ParamSurface& surf, int nt, int ns);

}  // namespace isoarea
