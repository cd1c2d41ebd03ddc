#pragma once

// Badly approximable vectors, orbit density thresholds T_a(eps) for the
// sequence {m a}, and the explicit exponents bounding them.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqdist/curve.hpp"
#include "eqdist/torus.hpp"
#include "eqdist/types.hpp"

namespace eqdist {

enum class Norm { l1, l2, linf };

std::string to_string(Norm norm);
Norm parse_norm(const std::string& text);
double vector_norm(const IntVec& v, Norm norm);

/// Distance from z to the nearest integer, in [0, 1/2].
double torus_distance(double z);

/// A vector x is (c,q)-badly approximable when ||<x,nu>||_T > c / ||nu||^q
/// for every nonzero integer nu.
struct BapCertificate {
  RealVec x;
  double c = 0.0;
  double q = 0.0;
  std::int64_t cutoff = 0;
  Norm norm = Norm::l2;
  bool verified = false;
  std::optional<IntVec> violator;
  double violator_distance = 0.0;  // ||<x, violator>||_T
  double violator_bound = 0.0;     // c / ||violator||^q
  std::uint64_t checked = 0;
};

inline constexpr double kMaxBapLattice = 1e9;

/// Scans every nu with 0 < ||nu|| <= cutoff. Since nu and -nu give the same
/// distance, only vectors whose first nonzero entry is positive are visited,
/// in lexicographic order; the first violation found is reported.
BapCertificate bap_check(std::span<const double> x, double c, double q, std::int64_t cutoff,
                         Norm norm = Norm::l2);

/// E(n,q) = (q+1) n(n+1)/2 + q sum_{i=0}^{n-2} (i+1)(2n-i)/2.
double lambda_exponent(int n, double q);

/// (q+1) n(n+1) + q sum_{i=0}^{n-2} (i+1)(2n-i) + 1, the dilation exponent.
double a_eps_exponent(int n, double q);

struct TBound {
  double value = 0.0;
  /// False when the value omits an unspecified multiplicative constant.
  bool exact = false;
};

/// n = 1: 1 / (c eps^(q+1)). n > 1: (1/eps)^E(n,q) up to a constant.
TBound t_bound(int n, double q, double c, double eps);

struct BapParams {
  double c = 0.0;
  double q = 0.0;
};

struct ThresholdReport {
  RealVec a;
  double eps = 0.0;
  std::optional<std::uint64_t> empirical_T;  // absent when exhausted
  std::uint64_t max_iter = 0;
  double grid_side = 0.0;
  std::size_t cells_total = 0;
  std::size_t cells_hit = 0;
  double exponent = 0.0;  // E(n, q); NaN without BAP parameters
  double bound_value = 0.0;
  bool bound_exact = false;
};

/// Smallest N such that {m a mod 1 : 1 <= m <= N} hits every cell of the
/// density grid for eps, or exhausted after max_iter.
ThresholdReport t_empirical(std::span<const double> a, double eps, std::uint64_t max_iter = 10'000'000,
                            std::optional<BapParams> bap = std::nullopt);

struct RecursionStep {
  /// c1^(q+1) / (c eps^(n(q+1))), relating T_a(3 eps) to T_w(eps).
  double factor = 0.0;
  /// c' = c eps^(nq) / (c1^q (n+1)^q): w is (c', q)-badly approximable.
  double c_next = 0.0;
  double q = 0.0;
};

RecursionStep recursion_step(int n, double q, double c, double c1, double eps);

/// Product of recursion factors from n down to 1 times the n = 1 bound for
/// the final reduced constant.
double unrolled_t_bound(int n, double q, double c, double c1, double eps);

/// Pigeonhole cell-count constant c1 with N = c1 / eps^n = ceil(1/eps)^n.
double pigeonhole_constant(int n, double eps);

struct DilationLevel {
  double lambda = 0.0;
  std::size_t samples = 0;
  std::size_t cells_hit = 0;
  std::size_t cells_total = 0;
  bool certified = false;
};

struct DilationThresholdReport {
  BapCertificate derivative_bap;  // for (a_11, ..., a_n1)
  std::vector<std::string> warnings;
  double eps = 0.0;
  std::vector<DilationLevel> levels;
  std::optional<double> least_certified_lambda;
  double predicted_exponent = 0.0;  // a_eps_exponent(n, q)
  double predicted_threshold = 0.0;  // eps^-exponent, constant-free
};

struct DilationExperimentOptions {
  BapParams bap{0.38, 1.0};
  std::int64_t cutoff = 1000;
  Norm norm = Norm::l2;
  /// Orbit samples per lambda; default_orbit_samples when zero.
  std::size_t samples = 0;
  unsigned threads = 1;
};

DilationThresholdReport dilation_threshold_experiment(const PolyCurve& curve, double eps,
                                                      std::span<const double> lambdas,
                                                      const DilationExperimentOptions& options = {});

}  // namespace eqdist
