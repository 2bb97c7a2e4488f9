#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "isoarea/rng.hpp"

namespace isoarea {

// Points and tangents of C^n viewed as R^2n. Coordinates are interleaved
// (x1, y1, ..., xn, yn), so the complex coordinate z_k = x_k + i*y_k lives
// in entries (2k, 2k+1). Both the complex structure J and the symplectic
// form act pairwise on adjacent entries.
using RealVector = Eigen::VectorXd;

// Ambient complex dimension of v; throws if v has odd real dimension.
int ambient_n(const RealVector& v);

// omega(u, v) = sum_k (x_k(u) y_k(v) - y_k(u) x_k(v)).
double symplectic_form(const RealVector& u, const RealVector& v);

// J: (x_k, y_k) -> (-y_k, x_k). Satisfies J^2 = -Id.
RealVector apply_complex_structure(const RealVector& v);

// sqrt(det Gram) of up to 2n vectors; 0 iff linearly dependent.
double wedge_norm(const std::vector<RealVector>& vectors);

// A 2-plane given by an orthonormal spanning pair. The constructor rejects
// frames that are not orthonormal to 1e-12.
struct TwoPlane {
  RealVector e1, e2;
  int n = 0;

  TwoPlane(RealVector a, RealVector b);
};

// |omega(e1, e2)|: 1 for complex planes, 0 for isotropic ones. Frame
// independent on a fixed plane.
double kahler_cosine(const TwoPlane& p);

// The canonical pair P = span((1,0),(ia, sqrt(1-a^2))) and
// P' = span((0,1),(sqrt(1-a^2), ia)), embedded in the first two complex
// coordinates of C^n. P and P' are omega-orthogonal for every a in [0,1).
std::pair<TwoPlane, TwoPlane> canonical_plane(double a, int n);

// Unitary map of C^n stored as its real 2n x 2n embedding; commutes with J
// by construction.
struct UnitaryMatrix {
  Eigen::MatrixXd real;  // 2n x 2n
  int n = 0;

  RealVector apply(const RealVector& v) const { return real * v; }
  // max |U^T U - I| entry, for unitarity checks.
  double orthonormality_defect() const;
};

// Haar-distributed sample: complex Gaussian matrix, modified Gram-Schmidt
// left to right, then each column rescaled by the conjugate phase of the
// corresponding triangular diagonal entry.
UnitaryMatrix haar_unitary(int n, Rng& rng);

// Coordinate axis unit vector in R^2n: axis_vector(n, k, false) is x_{k+1},
// axis_vector(n, k, true) is y_{k+1}.
RealVector axis_vector(int n, int k, bool imaginary);

// Interprets 2n interleaved reals as an n-vector of complex numbers.
Eigen::VectorXcd to_complex(const RealVector& v);
RealVector from_complex(const Eigen::VectorXcd& z);

}  // namespace isoarea
