#include "isoarea/mobius.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace isoarea {

namespace {

RealVector project_onto(const TwoPlane& p, const RealVector& v) {
  return RealVector(v.dot(p.e1) * p.e1 + v.dot(p.e2) * p.e2);
}

RealVector curve_derivative(const std::function<RealVector(double)>& f,
                            const std::function<RealVector(double)>& fdot, double t,
                            double period) {
  if (fdot) return fdot(t);
  const double h = 1e-6 * period;
  return RealVector((f(t + h) - f(t - h)) / (2.0 * h));
}

}  // namespace

ParamSurface band_from_curves(const CurvePair& pair, const TwoPlane& P,
                              const TwoPlane& P_prime, int validation_samples) {
  for (const auto& u : {P.e1, P.e2})
    for (const auto& v : {P_prime.e1, P_prime.e2}) {
      double w = std::abs(symplectic_form(u, v));
      if (w > 1e-10) {
        std::ostringstream msg;
        msg << "band_from_curves: planes not omega-orthogonal, residual " << w;
        throw std::invalid_argument(msg.str());
      }
    }

  for (int i = 0; i < validation_samples; ++i) {
    double t = pair.period * i / validation_samples;
    RealVector a = pair.alpha(t), b = pair.beta(t);
    if ((a - project_onto(P, a)).norm() > 1e-12)
      throw std::invalid_argument("band_from_curves: alpha leaves the plane P");
    if ((b - project_onto(P_prime, b)).norm() > 1e-12)
      throw std::invalid_argument("band_from_curves: beta leaves the plane P'");
    double wa = symplectic_form(a, curve_derivative(pair.alpha, pair.alpha_dot, t, pair.period));
    double wb = symplectic_form(b, curve_derivative(pair.beta, pair.beta_dot, t, pair.period));
    if (std::abs(wa - wb) > 1e-10) {
      std::ostringstream msg;
      msg << "band_from_curves: omega(alpha,alpha') != omega(beta,beta') at t=" << t
          << " (difference " << wa - wb << ")";
      throw std::invalid_argument(msg.str());
    }
  }

  ParamSurface surf;
  surf.n = P.n;
  surf.t0 = 0.0;
  surf.t1 = pair.period;
  surf.s0 = 0.0;
  surf.s1 = M_PI / 2.0;
  surf.identification =
      pair.half_period_symmetry ? EdgeIdentification::mobius : EdgeIdentification::cylinder;
  auto alpha = pair.alpha, beta = pair.beta;
  surf.map = [alpha, beta](double t, double s) {
    return RealVector(std::cos(s) * alpha(t) + std::sin(s) * beta(t));
  };
  if (pair.alpha_dot && pair.beta_dot) {
    auto da = pair.alpha_dot, db = pair.beta_dot;
    surf.jacobian = [alpha, beta, da, db](double t, double s) {
      RealVector ft = std::cos(s) * da(t) + std::sin(s) * db(t);
      RealVector fs = -std::sin(s) * alpha(t) + std::cos(s) * beta(t);
      return std::make_pair(ft, fs);
    };
  }
  validate_identifications(surf);
  return surf;
}

ParamSurface complex_band(int n) {
  if (n < 2) throw std::invalid_argument("complex_band: need n >= 2");
  const double r2 = std::sqrt(2.0);

  ParamSurface surf;
  surf.n = n;
  surf.t0 = 0.0;
  surf.t1 = 2.0 * M_PI;
  surf.s0 = 0.0;
  surf.s1 = M_PI / 2.0;
  surf.identification = EdgeIdentification::mobius;
  surf.map = [n](double t, double s) {
    RealVector v = RealVector::Zero(2 * n);
    v[0] = std::cos(s) * std::cos(t);
    v[1] = std::cos(s) * std::sin(t);
    v[2] = std::sin(s) * std::cos(2 * t) / std::sqrt(2.0);
    v[3] = std::sin(s) * std::sin(2 * t) / std::sqrt(2.0);
    return v;
  };
  surf.jacobian = [n, r2](double t, double s) {
    RealVector ft = RealVector::Zero(2 * n), fs = RealVector::Zero(2 * n);
    // F_t = (i cos s e^{it}, sqrt(2) i sin s e^{2it})
    ft[0] = -std::cos(s) * std::sin(t);
    ft[1] = std::cos(s) * std::cos(t);
    ft[2] = -r2 * std::sin(s) * std::sin(2 * t);
    ft[3] = r2 * std::sin(s) * std::cos(2 * t);
    // F_s = (-sin s e^{it}, cos s e^{2it}/sqrt(2))
    fs[0] = -std::sin(s) * std::cos(t);
    fs[1] = -std::sin(s) * std::sin(t);
    fs[2] = std::cos(s) * std::cos(2 * t) / r2;
    fs[3] = std::cos(s) * std::sin(2 * t) / r2;
    return std::make_pair(ft, fs);
  };
  return surf;
}

ParamSurface noncomplex_band(double a, int n) {
  if (!(a >= 0.0 && a < 1.0))
    throw std::invalid_argument("noncomplex_band: a must lie in [0,1)");
  if (n < 2) throw std::invalid_argument("noncomplex_band: need n >= 2");
  const double b = std::sqrt(1.0 - a * a);
  const double r2 = std::sqrt(2.0);

  // alpha(t) = cos t (1,0) + sin t (ia, b)
  // beta(t)  = (cos 2t (0,1) + sin 2t (b, ia)) / sqrt(2)
  auto alpha = [a, b, n](double t) {
    RealVector v = RealVector::Zero(2 * n);
    v[0] = std::cos(t);
    v[1] = a * std::sin(t);
    v[2] = b * std::sin(t);
    return v;
  };
  auto beta = [a, b, n, r2](double t) {
    RealVector v = RealVector::Zero(2 * n);
    v[0] = b * std::sin(2 * t) / r2;
    v[2] = std::cos(2 * t) / r2;
    v[3] = a * std::sin(2 * t) / r2;
    return v;
  };

  ParamSurface surf;
  surf.n = n;
  surf.t0 = 0.0;
  surf.t1 = 2.0 * M_PI;
  surf.s0 = 0.0;
  surf.s1 = M_PI / 2.0;
  surf.identification = EdgeIdentification::mobius;
  surf.map = [alpha, beta](double t, double s) {
    return RealVector(std::cos(s) * alpha(t) + std::sin(s) * beta(t));
  };
  surf.jacobian = [a, b, n, r2, alpha, beta](double t, double s) {
    RealVector da = RealVector::Zero(2 * n), db = RealVector::Zero(2 * n);
    da[0] = -std::sin(t);
    da[1] = a * std::cos(t);
    da[2] = b * std::cos(t);
    db[0] = r2 * b * std::cos(2 * t);
    db[2] = -r2 * std::sin(2 * t);
    db[3] = r2 * a * std::cos(2 * t);
    RealVector ft = std::cos(s) * da + std::sin(s) * db;
    RealVector fs = -std::sin(s) * alpha(t) + std::cos(s) * beta(t);
    return std::make_pair(ft, fs);
  };
  return surf;
}

double band_area_bound_integrand(double a, double t, double s) {
  if (!(a >= 0.0 && a < 1.0))
    throw std::invalid_argument("band_area_bound_integrand: a must lie in [0,1)");
  const double b = std::sqrt(1.0 - a * a);
  return (1.0 + std::sin(s) * std::sin(s)) / std::sqrt(2.0) -
         std::sin(2 * s) * std::sin(3 * t) * b;
}

}  // namespace isoarea
