#include "eqdist/oscint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "eqdist/parallel.hpp"
#include "eqdist/quadrature.hpp"

namespace eqdist {

namespace {

constexpr std::size_t kHighNodes = 32;
constexpr std::size_t kLowNodes = 16;
// Maximal phase variation per panel: one radian per four nodes.
constexpr double kMaxPanelVariation = static_cast<double>(kHighNodes) / 4.0;

const GaussRule& high_rule() {
  static const GaussRule rule = gauss_legendre(kHighNodes);
  return rule;
}

const GaussRule& low_rule() {
  static const GaussRule rule = gauss_legendre(kLowNodes);
  return rule;
}

struct Panel {
  double lo;
  double hi;
};

std::vector<Panel> initial_panels(const PolyPhase& phase) {
  std::vector<Panel> panels;
  const double global = phase.derivative_bound(1.0);
  if (global * 1.0 <= kMaxPanelVariation) {
    panels.push_back({0.0, 1.0});
    return panels;
  }
  double lo = 0.0;
  while (lo < 1.0) {
    double hi = std::min(1.0, lo + kMaxPanelVariation / global);
    // Grow while the local derivative bound still admits a wider panel.
    for (int it = 0; it < 8 && hi < 1.0; ++it) {
      const double b = phase.derivative_bound(hi);
      const double cand = std::min(1.0, lo + kMaxPanelVariation / b);
      if (cand <= hi) break;
      if ((cand - lo) * phase.derivative_bound(cand) > kMaxPanelVariation) break;
      hi = cand;
    }
    panels.push_back({lo, hi});
    lo = hi;
  }
  return panels;
}

struct PanelSums {
  std::complex<double> high;
  double err;
};

PanelSums integrate_panels(const PolyPhase& phase, const std::vector<Panel>& panels) {
  const auto& hr = high_rule();
  const auto& lr = low_rule();
  std::complex<double> total{0.0, 0.0};
  double err = 0.0;
  for (const auto& p : panels) {
    const double half = 0.5 * (p.hi - p.lo);
    const double mid = 0.5 * (p.hi + p.lo);
    std::complex<double> hi_sum{0.0, 0.0}, lo_sum{0.0, 0.0};
    for (std::size_t i = 0; i < kHighNodes; ++i) {
      const double ph = phase(mid + half * hr.nodes[i]);
      hi_sum += hr.weights[i] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    for (std::size_t i = 0; i < kLowNodes; ++i) {
      const double ph = phase(mid + half * lr.nodes[i]);
      lo_sum += lr.weights[i] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    total += half * hi_sum;
    err += half * std::abs(hi_sum - lo_sum);
  }
  return {total, err};
}

}  // namespace

PolyPhase::PolyPhase(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DomainError("PolyPhase: degree must be positive");
  for (double a : coeffs_)
    if (!std::isfinite(a)) throw DomainError("PolyPhase: non-finite coefficient");
}

double PolyPhase::operator()(double t) const {
  double acc = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * t + coeffs_[k];
  return acc * t;
}

double PolyPhase::total_abs() const {
  double s = 0.0;
  for (double a : coeffs_) s += std::abs(a);
  return s;
}

double PolyPhase::derivative_bound(double r) const {
  double acc = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * r + static_cast<double>(k + 1) * std::abs(coeffs_[k]);
  return acc;
}

PolyPhase PolyPhase::negated() const {
  std::vector<double> c = coeffs_;
  for (double& a : c) a = -a;
  return PolyPhase(std::move(c));
}

QuadratureResult osc_integral(const PolyPhase& phase, double tol) {
  if (!(tol > 0.0)) throw DomainError("osc_integral: tol must be positive");
  if (phase.total_abs() > kMaxPhaseWeight)
    throw QuadratureBudgetError("osc_integral: phase weight exceeds 1e9",
                                {{0.0, 0.0}, std::numeric_limits<double>::infinity(), 0});

  // Rounding in phi(t) itself bounds what halving can achieve.
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + phase.total_abs());
  const double target = std::max(tol, floor);
  auto panels = initial_panels(phase);
  for (;;) {
    const auto sums = integrate_panels(phase, panels);
    QuadratureResult res{sums.high, sums.err, panels.size()};
    if (res.est_error <= target) return res;
    if (panels.size() * 2 > kMaxPanels)
      throw QuadratureBudgetError("osc_integral: tolerance not reached within panel budget", res);
    std::vector<Panel> refined;
    refined.reserve(panels.size() * 2);
    for (const auto& p : panels) {
      const double mid = 0.5 * (p.lo + p.hi);
      refined.push_back({p.lo, mid});
      refined.push_back({mid, p.hi});
    }
    panels = std::move(refined);
  }
}

double vdc_bound(const PolyPhase& phase, double constant) {
  if (!(constant > 0.0)) throw DomainError("vdc_bound: constant must be positive");
  const double s = phase.total_abs();
  if (s == 0.0) throw DomainError("vdc_bound: undefined for the zero phase");
  return constant / std::pow(s, 1.0 / static_cast<double>(phase.degree()));
}

std::vector<PolyPhase> sample_probe_phases(std::size_t degree, std::size_t samples, std::uint64_t seed) {
  if (degree == 0) throw DomainError("sample_probe_phases: degree must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_mag(-2.0, 4.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<PolyPhase> out;
  out.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> c(degree);
    for (auto& a : c) {
      const double mag = std::pow(10.0, log_mag(rng));
      a = sign(rng) ? -mag : mag;
    }
    out.emplace_back(std::move(c));
  }
  return out;
}

namespace {

double normalized_product(const PolyPhase& phase, double tol) {
  const auto r = osc_integral(phase, tol);
  return std::abs(r.value) * std::pow(phase.total_abs(), 1.0 / static_cast<double>(phase.degree()));
}

// Compass search over log10|a_k| inside the sampling box, signs fixed.
double refine_product(const PolyPhase& start, double start_value, double tol) {
  const auto& c0 = start.coeffs();
  std::vector<double> u(c0.size()), sign(c0.size());
  for (std::size_t k = 0; k < c0.size(); ++k) {
    u[k] = std::log10(std::abs(c0[k]));
    sign[k] = c0[k] < 0 ? -1.0 : 1.0;
  }
  auto eval = [&](const std::vector<double>& v) {
    std::vector<double> c(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) c[k] = sign[k] * std::pow(10.0, v[k]);
    return normalized_product(PolyPhase(std::move(c)), tol);
  };
  double best = start_value;
  std::size_t evals = 0;
  for (double step = 0.05; step > 1e-6 && evals < kProbeRefineEvals;) {
    bool moved = false;
    for (std::size_t k = 0; k < u.size(); ++k)
      for (double dir : {1.0, -1.0}) {
        auto v = u;
        v[k] = std::clamp(v[k] + dir * step, -2.0, 4.0);
        if (v[k] == u[k]) continue;
        const double f = eval(v);
        ++evals;
        if (f > best) {
          best = f;
          u = std::move(v);
          moved = true;
        }
      }
    if (!moved) step *= 0.5;
  }
  return best;
}

}  // namespace

double vdc_constant_probe(std::size_t degree, std::size_t samples, std::uint64_t seed, double tol,
                          unsigned threads) {
  if (samples == 0) throw DomainError("vdc_constant_probe: samples must be >= 1");
  const auto phases = sample_probe_phases(degree, samples, seed);
  const auto products =
      parallel_map(phases.size(), threads, [&](std::size_t i) { return normalized_product(phases[i], tol); });
  std::vector<std::size_t> order(phases.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t top = std::min<std::size_t>(kProbeRefineStarts, order.size());
  std::partial_sort(order.begin(), order.begin() + top, order.end(),
                    [&](std::size_t a, std::size_t b) { return products[a] > products[b] || (products[a] == products[b] && a < b); });
  const auto refined = parallel_map(top, threads, [&](std::size_t i) {
    return refine_product(phases[order[i]], products[order[i]], tol);
  });
  double best = 0.0;
  for (double p : products) best = std::max(best, p);
  for (double p : refined) best = std::max(best, p);
  return best;
}

}  // namespace eqdist
