#pragma once

#include <vector>

namespace jdisc::detail {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], increasing
  std::vector<double> weights;
};

/// q-point Gauss–Legendre rule, exact for polynomials of degree 2q - 1.
GaussRule gauss_legendre(int q);

}  // namespace jdisc::detail
