#pragma once

// Oscillatory integrals I(phi) = int_0^1 exp(i phi(t)) dt for polynomial
// phases phi(t) = sum_k a_k t^k and the Van der Corput bound
// |I(phi)| <= C / (sum_k |a_k|)^(1/d).

#include <complex>
#include <cstdint>
#include <vector>

#include "eqdist/errors.hpp"

namespace eqdist {

class PolyPhase {
 public:
  /// coeffs[k-1] = a_k; the length fixes the nominal degree d.
  explicit PolyPhase(std::vector<double> coeffs);

  std::size_t degree() const { return coeffs_.size(); }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double operator()(double t) const;
  double total_abs() const;
  /// Upper bound of |phi'| on [0, r].
  double derivative_bound(double r) const;
  PolyPhase negated() const;

 private:
  std::vector<double> coeffs_;
};

struct QuadratureResult {
  std::complex<double> value;
  double est_error = 0.0;
  std::size_t panels_used = 0;
};

/// Tolerance not reached within the panel budget; carries the best estimate.
class QuadratureBudgetError : public ResourceError {
 public:
  QuadratureBudgetError(const std::string& what, QuadratureResult best)
      : ResourceError(what), best_(best) {}
  const QuadratureResult& best() const { return best_; }

 private:
  QuadratureResult best_;
};

inline constexpr double kMaxPhaseWeight = 1e9;
inline constexpr std::size_t kMaxPanels = std::size_t{1} << 22;

/// Composite Gauss-Legendre (32 nodes, embedded 16-node estimate) on panels
/// each spanning at most 8 radians of phase, halved until the estimate
/// is within tol. For large phases the target is raised to the rounding
/// floor 16 eps (1 + sum|a_k|); est_error reports what was reached.
QuadratureResult osc_integral(const PolyPhase& phase, double tol = 1e-10);

/// C / (sum_k |a_k|)^(1/d).
double vdc_bound(const PolyPhase& phase, double constant);

/// Phases used by the constant probe: magnitudes log-uniform in [1e-2, 1e4],
/// independent random signs.
std::vector<PolyPhase> sample_probe_phases(std::size_t degree, std::size_t samples, std::uint64_t seed);

inline constexpr std::size_t kProbeRefineStarts = 8;
inline constexpr std::size_t kProbeRefineEvals = 300;

/// max over sampled phases of |I(phi)| * (sum_k |a_k|)^(1/d), with the best
/// kProbeRefineStarts samples pushed uphill by a local search in log|a_k|
/// (at most kProbeRefineEvals integrals each).
double vdc_constant_probe(std::size_t degree, std::size_t samples, std::uint64_t seed,
                          double tol = 1e-10, unsigned threads = 1);

}  // namespace eqdist
