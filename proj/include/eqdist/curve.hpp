#pragma once

// Polynomial curves p(t) = (p_1(t), ..., p_n(t)), p_j(t) = sum_k a_jk t^k,
// with no constant term, and kernel analysis of the transposed coefficient
// matrix A* (d x n).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "eqdist/types.hpp"

namespace eqdist {

using Rational = boost::multiprecision::cpp_rational;

class PolyCurve {
 public:
  /// `coeffs` is row-major n x d: row j holds a_j1 .. a_jd.
  PolyCurve(std::size_t n, std::size_t d, std::vector<double> coeffs);

  std::size_t dim() const { return n_; }
  std::size_t degree() const { return d_; }

  /// a_jk with 0-based row j and 1-based power k.
  double coeff(std::size_t j, std::size_t k) const { return coeffs_[j * d_ + (k - 1)]; }
  std::span<const double> row(std::size_t j) const { return {coeffs_.data() + j * d_, d_}; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  /// Sum of |a_jk| over the whole matrix.
  double total_abs() const;

  /// Horner evaluation of every row; t must lie in [0, 1].
  RealVec eval(double t) const;

  PolyCurve dilate(double lambda) const;

  /// (A* nu)_k = sum_j a_jk nu_j, the coefficients of <nu, p(t)>.
  RealVec apply_transpose(std::span<const std::int64_t> nu) const;
  RealVec apply_transpose(std::span<const double> y) const;

  /// True when d < n, in which case the real kernel of A* is never trivial.
  bool degree_below_dim() const { return d_ < n_; }

  friend bool operator==(const PolyCurve&, const PolyCurve&) = default;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> coeffs_;
};

class RationalPolyCurve {
 public:
  RationalPolyCurve(std::size_t n, std::size_t d, std::vector<Rational> coeffs);

  /// Exact conversion of the binary values stored in a real curve.
  static RationalPolyCurve from_real(const PolyCurve& curve);

  std::size_t dim() const { return n_; }
  std::size_t degree() const { return d_; }
  const Rational& coeff(std::size_t j, std::size_t k) const { return coeffs_[j * d_ + (k - 1)]; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  PolyCurve to_real() const;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<Rational> coeffs_;
};

/// Basis of the rational kernel of A*, each vector primitive with its first
/// nonzero entry positive. Empty iff the kernel is trivial over Q.
std::vector<IntVec> rational_kernel_basis(const RationalPolyCurve& curve);

struct RealKernelVerdict {
  bool trivial = false;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  /// c with ||A* x||_1 >= c ||x||_1 for all x; zero when not trivial.
  double l1_lower_bound = 0.0;
};

/// Trivial iff sigma_min(A*) > tol * sigma_max(A*).
RealKernelVerdict real_kernel_trivial(const PolyCurve& curve, double tol = 1e-10);

/// Parses "n=2; d=2; coeffs=1, 0, 0, 1". Coefficient tokens are integers,
/// decimals, scientific literals or num/den fractions.
RationalPolyCurve parse_rational_curve(const std::string& text);
PolyCurve parse_curve(const std::string& text);

/// Exact rational from a numeric token: "3", "-0.25", "1/3", "2.5e-3".
Rational parse_rational_token(const std::string& token);

}  // namespace eqdist
