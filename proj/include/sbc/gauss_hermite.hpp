#pragma once

#include <vector>

namespace sbc {

// Nodes and weights for  int f(x) exp(-x^2) dx ~ sum_k w_k f(x_k).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Newton iteration on the orthonormal Hermite recurrence; n >= 1.
GaussHermiteRule gauss_hermite(int n);

}  // namespace sbc
