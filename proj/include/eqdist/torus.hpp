#pragma once

// Fourier coefficients of the measures mu_lambda obtained by pushing Lebesgue
// measure on [0,1] through t -> lambda p(t) mod Z^n, decay measurement,
// grid-based epsilon-density certificates and the equidistribution
// dichotomy for rational curves.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "eqdist/curve.hpp"
#include "eqdist/fit.hpp"
#include "eqdist/types.hpp"

namespace eqdist {

/// mu_lambda^(nu) = int_0^1 exp(2 pi i lambda <nu, p(t)>) dt.
std::complex<double> fourier_coeff(const PolyCurve& curve, double lambda, const IntVec& nu,
                                   double tol = 1e-10);

struct DecayRecord {
  double lambda = 0.0;
  IntVec nu;
  std::complex<double> coeff;
  double coeff_mag = 0.0;
  /// Van der Corput bound for the phase 2 pi lambda A* nu with the probe
  /// constant; +inf when A* nu = 0.
  double vdc_reference = 0.0;
  /// lambda^(1/d) ||A* nu||_1^(1/d) |coeff|.
  double normalized = 0.0;
  bool failed = false;
  double est_error = 0.0;
};

/// Per-lambda suprema over the nu-box (failed records excluded).
struct DecayLevel {
  double lambda = 0.0;
  double sup_coeff_mag = 0.0;
  /// sup ||nu||_1^(1/d) |coeff|.
  double sup_weighted = 0.0;
  /// lambda^(1/d) * sup_weighted.
  double sup_normalized = 0.0;
};

struct DecayReport {
  std::vector<DecayRecord> records;  // (lambda, lexicographic nu) order
  std::vector<DecayLevel> levels;
  int nu_box = 0;
  double vdc_constant = 0.0;
  double tol = 0.0;
  bool degree_below_dim = false;
  std::size_t failed_records = 0;
};

struct DecaySweepOptions {
  int nu_box = 8;
  double tol = 1e-10;
  /// Van der Corput constant for vdc_reference; probed when absent.
  std::optional<double> vdc_constant;
  std::size_t probe_samples = 64;
  std::uint64_t probe_seed = 0;
  unsigned threads = 1;
};

/// All nu with 0 < ||nu||_inf <= box, lexicographic from (-box, ..., -box).
std::vector<IntVec> nu_box_vectors(std::size_t dim, int box);

DecayReport decay_sweep(const PolyCurve& curve, std::span<const double> lambdas,
                        const DecaySweepOptions& options = {});

/// Least-squares slope of log sup_nu |coeff| against log lambda. Levels whose
/// supremum is <= tol are skipped; fewer than three remaining is an error.
PowerLawFit fit_decay_exponent(std::span<const DecayLevel> levels, double tol = 1e-10);

/// max over levels of sup_normalized divided by its median.
double normalized_spread(std::span<const DecayLevel> levels);

/// Row-major point cloud in [0,1)^dim.
class PointSet {
 public:
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ ? coords_.size() / dim_ : 0; }
  bool empty() const { return coords_.empty(); }
  std::span<const double> operator[](std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  void push_back(std::span<const double> p);
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

inline constexpr std::size_t kMaxDensityCells = 100'000'000;

/// max(1e3, 50 lambda sum|a_jk|) clamped to 1e7.
std::size_t default_orbit_samples(const PolyCurve& curve, double lambda);

/// frac(lambda p(t_i)) at t_i = i / (samples - 1).
PointSet project_orbit(const PolyCurve& curve, double lambda, std::size_t samples);

/// Grid of m cells per axis over [0,1)^n, m the least power of two with
/// m >= sqrt(n) / eps. Every torus point lies within one cell diameter
/// sqrt(n)/m <= eps of any point in its cell, so hitting every cell certifies
/// eps-density. Missing cells do not prove non-density. Powers of two keep the
/// grids for different eps nested, so certification is monotone in eps.
class DensityGrid {
 public:
  DensityGrid(std::size_t dim, double eps);

  /// Returns true when the point lands in a previously empty cell.
  bool insert(std::span<const double> point);

  std::size_t dim() const { return dim_; }
  std::size_t cells_per_axis() const { return m_; }
  std::size_t cells_total() const { return hit_.size(); }
  std::size_t cells_hit() const { return hits_; }
  bool complete() const { return hits_ == hit_.size(); }
  double side() const { return 1.0 / static_cast<double>(m_); }

  /// Center of an empty cell, preferring the one farthest (in cell steps)
  /// from any hit cell. Empty when the grid is complete.
  std::optional<RealVec> witness() const;

 private:
  std::size_t dim_;
  std::size_t m_;
  std::vector<bool> hit_;
  std::size_t hits_ = 0;
};

struct DensityVerdict {
  double eps = 0.0;
  double grid_side = 0.0;
  std::size_t cells_total = 0;
  std::size_t cells_hit = 0;
  bool certified_dense = false;
  std::optional<RealVec> witness;
};

DensityVerdict epsilon_dense(const PointSet& points, double eps);
DensityVerdict verdict_from_grid(const DensityGrid& grid, double eps);

struct Dichotomy {
  bool equidistributes = false;
  /// Primitive m with <m, lambda p(t)> = 0 for all lambda, t; the orbit lies
  /// in the subtorus L_m = {x : <m, x> = 0 mod 1}.
  std::optional<IntVec> witness;
  std::vector<IntVec> kernel_basis;
};

Dichotomy equidistribution_dichotomy(const RationalPolyCurve& curve);

}  // namespace eqdist
