#pragma once

// Heisenberg group H_n(R) in (x, y, z) coordinates with product
// (x,y,z)(x',y',z') = (x+x', y+y', z+z'+<x,y'>), parabolic dilations,
// reduction modulo H_n(Z), and the Laplace eigenfunctions of the nilmanifold.
//
// Lattice convention: the eigenfunctions below are invariant under left
// translation g -> gamma g by integer points, so all reductions act on the
// left.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "eqdist/curve.hpp"
#include "eqdist/torus.hpp"
#include "eqdist/types.hpp"

namespace eqdist {

struct HeisPoint {
  RealVec x;
  RealVec y;
  double z = 0.0;

  std::size_t dim() const { return x.size(); }
  bool reduced() const;

  static HeisPoint identity(std::size_t n);
};

HeisPoint heis_mul(const HeisPoint& g, const HeisPoint& h);
HeisPoint heis_inv(const HeisPoint& g);
/// (x, y, z) -> (sqrt(lambda) x, sqrt(lambda) y, lambda z).
HeisPoint heis_dilate(const HeisPoint& g, double lambda);

struct Reduction {
  HeisPoint reduced;  // gamma * g, coordinates in [0,1)
  HeisPoint gamma;    // integer coordinates
};

Reduction reduce_fundamental(const HeisPoint& g);

/// p(t) = (a(t), b(t), c(t)), stored as one (2n+1)-row coefficient matrix.
class HeisCurve {
 public:
  HeisCurve(std::size_t n, std::size_t d, std::vector<double> coeffs);
  HeisCurve(std::size_t n, const RationalPolyCurve& rows);

  std::size_t dim() const { return n_; }
  std::size_t degree() const { return rows_.degree(); }
  HeisPoint at(double t) const;

  /// The 2n-dimensional curve (a, b) on the horizontal torus.
  PolyCurve horizontal() const;
  RationalPolyCurve horizontal_exact() const;
  const PolyCurve& rows() const { return rows_; }

 private:
  std::size_t n_;
  PolyCurve rows_;
  std::optional<RationalPolyCurve> exact_;
};

struct Horizontal {
  IntVec k;
  IntVec h;
};

struct Oscillator {
  IntVec q;
  std::int64_t m = 1;
  std::vector<int> h;
  int K = 10;
};

using EigenSpec = std::variant<Horizontal, Oscillator>;

std::size_t spec_dim(const EigenSpec& spec);
/// "f:k=(1),h=(0)" or "g:q=(0),m=1,h=(0)".
std::string spec_id(const EigenSpec& spec);
/// Inverse of spec_id; an oscillator may append ",K=<int>".
EigenSpec parse_spec(const std::string& text);

inline constexpr int kMaxHermiteIndex = 60;

/// F_nu(t) = (-1)^nu e^{t^2/2} d^nu/dt^nu e^{-t^2} by three-term recurrence.
double hermite_F(int nu, double t);

std::complex<double> eval_f(const IntVec& k, const IntVec& h, const HeisPoint& g);

/// Tolerance for the neglected lattice-sum tail of an oscillator evaluation.
inline constexpr double kLatticeTailTol = 1e-12;

/// Oscillator eigenfunction evaluated from the lattice sum over |k| <= K at
/// the given coordinates (no reduction). Throws ResourceError when the
/// estimated tail beyond K exceeds kLatticeTailTol.
std::complex<double> eval_g(const Oscillator& spec, const HeisPoint& g);

/// Evaluates either family; oscillators are evaluated at the reduced point.
std::complex<double> eval_eigen(const EigenSpec& spec, const HeisPoint& g);

/// Laplace eigenvalue; the dimension is taken from the spec.
double eigenvalue(const EigenSpec& spec);

/// |Delta_num f(g) - eigenvalue f(g)| / max(1, |eigenvalue f(g)|), with
/// Delta applied by central differences along D_j = d/dx_j,
/// D'_j = d/dy_j + x_j d/dz and d/dz.
double laplacian_residual(const EigenSpec& spec, const HeisPoint& g, double step = 1e-3);

/// int_0^1 phi(reduce(dilate(p(t), lambda))) dt by composite Gauss-Legendre
/// with about `samples` nodes.
std::complex<double> nil_integral(const HeisCurve& curve, double lambda, const EigenSpec& spec,
                                  std::size_t samples);

/// max(1e3, 50 lambda sum|coeffs|) clamped to 1e7, rounded to whole panels.
std::size_t default_nil_samples(const HeisCurve& curve, double lambda);

struct SpecSeries {
  std::string id;
  std::vector<double> magnitudes;  // one per lambda
  bool decreasing = false;         // strictly decreasing across the grid
};

struct NilEquiReport {
  std::vector<double> lambdas;
  std::vector<SpecSeries> series;
  Dichotomy horizontal;
  /// |horizontal coefficient| at the witness per lambda, when confined.
  std::vector<double> witness_magnitudes;
  bool oscillators_decay = true;
  /// Horizontal equidistribution implies oscillator decay on this grid.
  bool consistent = true;
  std::string quotient_convention = "left cosets H_n(Z) g";
};

struct NilEquiOptions {
  /// Nodes per integral; default_nil_samples when zero.
  std::size_t samples = 0;
  unsigned threads = 1;
};

NilEquiReport nil_equi_experiment(const HeisCurve& curve, std::span<const double> lambdas,
                                  std::span<const EigenSpec> specs, const NilEquiOptions& options = {});

}  // namespace eqdist
