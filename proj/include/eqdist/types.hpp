#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eqdist {

using IntVec = std::vector<std::int64_t>;
using RealVec = std::vector<double>;

std::string format_int_vec(const IntVec& v);  // "(2,-1)"

double l1_norm(const IntVec& v);
double l1_norm(const RealVec& v);

}  // namespace eqdist
