#include "eqdist/types.hpp"

#include <cmath>

namespace eqdist {

std::string format_int_vec(const IntVec& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  out += ')';
  return out;
}

double l1_norm(const IntVec& v) {
  double s = 0.0;
  for (auto x : v) s += std::abs(static_cast<double>(x));
  return s;
}

double l1_norm(const RealVec& v) {
  double s = 0.0;
  for (auto x : v) s += std::abs(x);
  return s;
}

}  // namespace eqdist
