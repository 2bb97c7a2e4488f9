#include "isoarea/ambient.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace isoarea {

namespace {
constexpr double kFrameTol = 1e-12;
}

int ambient_n(const RealVector& v) {
  if (v.size() % 2 != 0 || v.size() == 0)
    throw std::invalid_argument("RealVector must have even positive dimension");
  return static_cast<int>(v.size() / 2);
}

double symplectic_form(const RealVector& u, const RealVector& v) {
  if (u.size() != v.size())
    throw std::invalid_argument("symplectic_form: dimension mismatch");
  int n = ambient_n(u);
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    s += u[2 * k] * v[2 * k + 1] - u[2 * k + 1] * v[2 * k];
  return s;
}

RealVector apply_complex_structure(const RealVector& v) {
  int n = ambient_n(v);
  RealVector out(v.size());
  for (int k = 0; k < n; ++k) {
    out[2 * k] = -v[2 * k + 1];
    out[2 * k + 1] = v[2 * k];
  }
  return out;
}

double wedge_norm(const std::vector<RealVector>& vectors) {
  if (vectors.empty()) return 1.0;
  const auto m = static_cast<Eigen::Index>(vectors.size());
  const auto dim = vectors.front().size();
  if (m > dim)
    throw std::invalid_argument("wedge_norm: more vectors than ambient dimension");
  for (const auto& v : vectors)
    if (v.size() != dim) throw std::invalid_argument("wedge_norm: mixed dimensions");

  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i; j < m; ++j)
      gram(i, j) = gram(j, i) = vectors[i].dot(vectors[j]);
  double det = gram.determinant();
  return det > 0.0 ? std::sqrt(det) : 0.0;
}

TwoPlane::TwoPlane(RealVector a, RealVector b) : e1(std::move(a)), e2(std::move(b)) {
  if (e1.size() != e2.size())
    throw std::invalid_argument("TwoPlane: frame dimension mismatch");
  n = ambient_n(e1);
  if (std::abs(e1.norm() - 1.0) > kFrameTol || std::abs(e2.norm() - 1.0) > kFrameTol ||
      std::abs(e1.dot(e2)) > kFrameTol)
    throw std::invalid_argument("TwoPlane: frame not orthonormal within 1e-12");
}

double kahler_cosine(const TwoPlane& p) {
  return std::abs(symplectic_form(p.e1, p.e2));
}

std::pair<TwoPlane, TwoPlane> canonical_plane(double a, int n) {
  if (!(a >= 0.0 && a < 1.0))
    throw std::invalid_argument("canonical_plane: a must lie in [0,1)");
  if (n < 2) throw std::invalid_argument("canonical_plane: need n >= 2");
  const double b = std::sqrt(1.0 - a * a);

  RealVector p1 = RealVector::Zero(2 * n), p2 = RealVector::Zero(2 * n);
  p1[0] = 1.0;            // (1, 0)
  p2[1] = a;              // (ia, sqrt(1-a^2))
  p2[2] = b;

  RealVector q1 = RealVector::Zero(2 * n), q2 = RealVector::Zero(2 * n);
  q1[2] = 1.0;            // (0, 1)
  q2[0] = b;              // (sqrt(1-a^2), ia)
  q2[3] = a;

  return {TwoPlane(std::move(p1), std::move(p2)), TwoPlane(std::move(q1), std::move(q2))};
}

double UnitaryMatrix::orthonormality_defect() const {
  Eigen::MatrixXd g = real.transpose() * real;
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

UnitaryMatrix haar_unitary(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("haar_unitary: n must be positive");
  using C = std::complex<double>;
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = C(rng.normal(), rng.normal());

  Eigen::MatrixXcd q(n, n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXcd v = g.col(k);
    for (int j = 0; j < k; ++j) v -= q.col(j).dot(v) * q.col(j);
    double r = v.norm();
    while (r < 1e-200) {  // singular draw: regenerate the column
      for (int i = 0; i < n; ++i) v[i] = C(rng.normal(), rng.normal());
      for (int j = 0; j < k; ++j) v -= q.col(j).dot(v) * q.col(j);
      r = v.norm();
    }
    v /= r;
    C rkk = v.dot(g.col(k));  // triangular diagonal entry
    C phase = rkk / std::abs(rkk);
    q.col(k) = v * std::conj(phase);
  }

  UnitaryMatrix u;
  u.n = n;
  u.real.resize(2 * n, 2 * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double re = q(i, j).real(), im = q(i, j).imag();
      u.real(2 * i, 2 * j) = re;
      u.real(2 * i, 2 * j + 1) = -im;
      u.real(2 * i + 1, 2 * j) = im;
      u.real(2 * i + 1, 2 * j + 1) = re;
    }
  return u;
}

RealVector axis_vector(int n, int k, bool imaginary) {
  RealVector v = RealVector::Zero(2 * n);
  v[2 * k + (imaginary ? 1 : 0)] = 1.0;
  return v;
}

Eigen::VectorXcd to_complex(const RealVector& v) {
  int n = ambient_n(v);
  Eigen::VectorXcd z(n);
  for (int k = 0; k < n; ++k) z[k] = {v[2 * k], v[2 * k + 1]};
  return z;
}

RealVector from_complex(const Eigen::VectorXcd& z) {
  RealVector v(2 * z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    v[2 * k] = z[k].real();
    v[2 * k + 1] = z[k].imag();
  }
  return v;
}

}  // namespace isoarea
