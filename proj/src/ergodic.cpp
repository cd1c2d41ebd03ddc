#include "eqdist/ergodic.hpp"

#include <cmath>
#include <limits>

#include "eqdist/errors.hpp"
#include "eqdist/oscint.hpp"
#include "eqdist/parallel.hpp"
#include "eqdist/quadrature.hpp"

namespace eqdist {

namespace {

bool degenerate(const Atom& a, const PolyCurve& curve) {
  const auto c = curve.apply_transpose(std::span<const double>(a.y));
  for (double v : c)
    if (v != 0.0) return false;
  return true;
}

bool is_origin(const RealVec& y) {
  for (double v : y)
    if (v != 0.0) return false;
  return true;
}

}  // namespace

AtomicSpectralMeasure::AtomicSpectralMeasure(std::vector<Atom> atoms) {
  for (auto& a : atoms) add(std::move(a));
}

void AtomicSpectralMeasure::add(Atom atom) {
  if (!(atom.weight > 0.0)) throw DomainError("spectral measure: atom weights must be positive");
  if (atom.y.empty()) throw DomainError("spectral measure: atom location is empty");
  if (!atoms_.empty() && atom.y.size() != dim()) throw DomainError("spectral measure: atom dimension mismatch");
  atoms_.push_back(std::move(atom));
}

AtomicSpectralMeasure AtomicSpectralMeasure::uniform_box(const RealVec& lo, const RealVec& hi, double mass,
                                                         std::size_t nodes) {
  if (lo.size() != hi.size() || lo.empty()) throw DomainError("uniform_box: bad bounds");
  if (!(mass > 0.0)) throw DomainError("uniform_box: mass must be positive");
  const auto rule = gauss_legendre(nodes);
  const std::size_t n = lo.size();
  double volume = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(hi[i] > lo[i])) throw DomainError("uniform_box: empty box");
    volume *= hi[i] - lo[i];
  }
  AtomicSpectralMeasure out;
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    Atom a;
    a.y.resize(n);
    double w = mass / volume;
    for (std::size_t i = 0; i < n; ++i) {
      const double half = 0.5 * (hi[i] - lo[i]);
      a.y[i] = lo[i] + half * (rule.nodes[idx[i]] + 1.0);
      w *= half * rule.weights[idx[i]];
    }
    a.weight = w;
    out.add(std::move(a));
    std::size_t i = n;
    while (i-- > 0) {
      if (++idx[i] < nodes) break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

double AtomicSpectralMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

double AtomicSpectralMeasure::zero_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_)
    if (is_origin(a.y)) s += a.weight;
  return s;
}

double psi(double lambda, std::span<const double> y, const PolyCurve& curve, double tol) {
  if (!(lambda > 0.0)) throw DomainError("psi: lambda must be positive");
  auto c = curve.apply_transpose(y);
  for (double& v : c) v *= lambda;
  return std::abs(osc_integral(PolyPhase(std::move(c)), tol).value);
}

double norm_x_lambda(const AtomicSpectralMeasure& measure, const PolyCurve& curve, double lambda, double tol) {
  double s = 0.0;
  for (const auto& a : measure.atoms()) {
    const double p = psi(lambda, a.y, curve, tol);
    s += a.weight * p * p;
  }
  return std::sqrt(s);
}

IntegrabilityValue integrability_value(const AtomicSpectralMeasure& measure, const PolyCurve& curve) {
  IntegrabilityValue v;
  const double expo = -2.0 / static_cast<double>(curve.degree());
  for (const auto& a : measure.atoms()) {
    const double len = l1_norm(curve.apply_transpose(std::span<const double>(a.y)));
    if (len == 0.0) {
      v.infinite = true;
      continue;
    }
    v.value += a.weight * std::pow(len, expo);
  }
  if (v.infinite) v.value = std::numeric_limits<double>::infinity();
  return v;
}

DecayDemoReport decay_demo(const AtomicSpectralMeasure& measure, const PolyCurve& curve,
                           std::span<const double> lambdas, double tol, unsigned threads) {
  if (lambdas.size() < 3) throw DomainError("decay_demo: need at least three lambdas");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0)) throw DomainError("decay_demo: lambda must be positive");
    if (i && !(lambdas[i] > lambdas[i - 1])) throw DomainError("decay_demo: lambda grid must be ascending");
  }
  DecayDemoReport rep;
  rep.integrability = integrability_value(measure, curve);
  rep.curve_nondegenerate = real_kernel_trivial(curve).trivial;
  rep.slope_limit = -1.0 / static_cast<double>(curve.degree()) + 0.15;

  AtomicSpectralMeasure nondeg;
  for (const auto& a : measure.atoms()) {
    if (degenerate(a, curve)) ++rep.degenerate_atoms;
    else nondeg.add(a);
  }
  if (rep.degenerate_atoms) rep.notes.push_back("degenerate atoms (A* y = 0) kept in the table, excluded from the decay fit");
  if (!rep.curve_nondegenerate)
    rep.notes.push_back("curve lies in a proper linear subspace (A* has a real kernel); no decay asserted");

  rep.rows = parallel_map(lambdas.size(), threads, [&](std::size_t i) {
    ErgodicRow r;
    r.lambda = lambdas[i];
    r.norm = norm_x_lambda(measure, curve, r.lambda, tol);
    r.nondegenerate_norm = nondeg.atoms().empty() ? 0.0 : norm_x_lambda(nondeg, curve, r.lambda, tol);
    return r;
  });

  if (!nondeg.atoms().empty()) {
    std::vector<double> xs, ys;
    for (const auto& r : rep.rows)
      if (r.nondegenerate_norm > 0.0) {
        xs.push_back(r.lambda);
        ys.push_back(r.nondegenerate_norm);
      }
    if (xs.size() >= 3) rep.fit = fit_log_log(xs, ys);
  }
  const bool finite_nondeg = integrability_value(nondeg, curve).infinite == false && !nondeg.atoms().empty();
  rep.asserted = rep.curve_nondegenerate && rep.fit.has_value() && finite_nondeg;
  if (rep.asserted) {
    rep.passed = rep.fit->slope <= rep.slope_limit;
    if (!rep.passed) rep.notes.push_back("fitted slope above -1/d + 0.15");
  }
  return rep;
}

}  // namespace eqdist
