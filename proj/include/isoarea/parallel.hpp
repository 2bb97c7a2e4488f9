#pragma once

#include <cstddef>
#include <vector>

namespace isoarea {

// Worker count for OpenMP regions; capped by the ISOAREA_THREADS env var.
int max_threads();

// Sum with a fixed pairwise reduction tree. The result depends only on the
// contents of x, not on how many threads filled it.
double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum(const std::vector<double>& x);

}  // namespace isoarea
