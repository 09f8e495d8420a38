#pragma once

#include <vector>

namespace degenwave {

// Gauss-Legendre rule mapped to [0, 1]; exact for polynomials of degree
// 2 * points - 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre_unit(int points);

}  // namespace degenwave
