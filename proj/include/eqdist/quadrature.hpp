#pragma once

#include <cstddef>
#include <vector>

namespace eqdist {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes by Newton iteration on P_n; accurate to rounding for n <= 128.
GaussRule gauss_legendre(std::size_t n);

}  // namespace eqdist
