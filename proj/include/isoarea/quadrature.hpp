#pragma once

#include <vector>

namespace isoarea {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on the three-term
// recurrence; accurate to machine precision for any order used here.
GaussRule gauss_legendre(int n);

// Same rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b);

}  // namespace isoarea
