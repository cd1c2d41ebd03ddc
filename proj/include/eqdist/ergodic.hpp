#pragma once

// Mean ergodic averages x_lambda = int_0^1 U_{lambda p(t)} x dt realised
// through an atomic spectral measure mu_x on R^n:
//   ||x_lambda||^2 = sum_i w_i |int_0^1 exp(i lambda <y_i, p(t)>) dt|^2.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqdist/curve.hpp"
#include "eqdist/fit.hpp"
#include "eqdist/types.hpp"

namespace eqdist {

struct Atom {
  RealVec y;
  double weight = 0.0;
};

class AtomicSpectralMeasure {
 public:
  AtomicSpectralMeasure() = default;
  explicit AtomicSpectralMeasure(std::vector<Atom> atoms);

  /// Uniform density of the given total mass on the box [lo, hi], discretised
  /// by a tensor Gauss-Legendre rule with `nodes` points per axis.
  static AtomicSpectralMeasure uniform_box(const RealVec& lo, const RealVec& hi, double mass, std::size_t nodes);

  void add(Atom atom);
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t dim() const { return atoms_.empty() ? 0 : atoms_.front().y.size(); }
  double total_mass() const;
  /// Mass carried by atoms at the origin (invariant vectors).
  double zero_mass() const;
  bool has_zero_atom() const { return zero_mass() > 0.0; }

 private:
  std::vector<Atom> atoms_;
};

/// |int_0^1 exp(i lambda <y, p(t)>) dt|.
double psi(double lambda, std::span<const double> y, const PolyCurve& curve, double tol = 1e-12);

double norm_x_lambda(const AtomicSpectralMeasure& measure, const PolyCurve& curve, double lambda,
                     double tol = 1e-12);

struct IntegrabilityValue {
  double value = 0.0;
  bool infinite = false;
};

/// sum_i w_i ||A* y_i||_1^(-2/d); infinite when some A* y_i = 0.
IntegrabilityValue integrability_value(const AtomicSpectralMeasure& measure, const PolyCurve& curve);

struct ErgodicRow {
  double lambda = 0.0;
  double norm = 0.0;
  /// Norm restricted to atoms with A* y != 0.
  double nondegenerate_norm = 0.0;
};

struct DecayDemoReport {
  std::vector<ErgodicRow> rows;
  IntegrabilityValue integrability;
  bool curve_nondegenerate = false;  // real kernel of A* trivial
  std::size_t degenerate_atoms = 0;
  std::optional<PowerLawFit> fit;   // of the nondegenerate part
  double slope_limit = 0.0;         // -1/d + 0.15
  bool asserted = false;
  bool passed = true;
  std::vector<std::string> notes;
};

DecayDemoReport decay_demo(const AtomicSpectralMeasure& measure, const PolyCurve& curve,
                           std::span<const double> lambdas, double tol = 1e-12, unsigned threads = 1);

}  // namespace eqdist
