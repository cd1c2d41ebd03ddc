#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace eqdist {

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through (log x_i, log y_i). All inputs must be positive.
PowerLawFit fit_log_log(std::span<const double> x, std::span<const double> y);

/// n points log-spaced from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

}  // namespace eqdist
