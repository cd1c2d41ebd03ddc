#include "eqdist/dioph.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "eqdist/errors.hpp"
#include "eqdist/parallel.hpp"

namespace eqdist {

std::string to_string(Norm norm) {
  switch (norm) {
    case Norm::l1: return "l1";
    case Norm::l2: return "l2";
    case Norm::linf: return "linf";
  }
  return "l2";
}

Norm parse_norm(const std::string& text) {
  if (text == "l1") return Norm::l1;
  if (text == "l2") return Norm::l2;
  if (text == "linf") return Norm::linf;
  throw DomainError("unknown norm '" + text + "' (expected l1, l2 or linf)");
}

double vector_norm(const IntVec& v, Norm norm) {
  double acc = 0.0;
  for (auto x : v) {
    const double a = std::abs(static_cast<double>(x));
    switch (norm) {
      case Norm::l1: acc += a; break;
      case Norm::l2: acc += a * a; break;
      case Norm::linf: acc = std::max(acc, a); break;
    }
  }
  return norm == Norm::l2 ? std::sqrt(acc) : acc;
}

double torus_distance(double z) {
  const long double zl = z;
  const long double d = std::abs(zl - std::nearbyint(zl));
  return static_cast<double>(d);
}

BapCertificate bap_check(std::span<const double> x, double c, double q, std::int64_t cutoff, Norm norm) {
  if (x.empty()) throw DomainError("bap_check: empty vector");
  if (cutoff < 1) throw DomainError("bap_check: cutoff must be >= 1");
  if (!(c > 0.0) || !(q > 0.0)) throw DomainError("bap_check: c and q must be positive");
  const std::size_t n = x.size();
  const double side = 2.0 * static_cast<double>(cutoff) + 1.0;
  if ((std::pow(side, static_cast<double>(n)) - 1.0) / 2.0 > kMaxBapLattice)
    throw ResourceError("bap_check: search space exceeds 1e9 lattice points");

  BapCertificate cert;
  cert.x.assign(x.begin(), x.end());
  cert.c = c;
  cert.q = q;
  cert.cutoff = cutoff;
  cert.norm = norm;

  const double limit = static_cast<double>(cutoff);
  IntVec nu(n, 0);
  // partial: accumulated norm ingredient of nu[0..i).
  std::function<bool(std::size_t, bool, double)> visit = [&](std::size_t i, bool all_zero, double partial) -> bool {
    if (i == n) {
      if (all_zero) return false;
      const double len = norm == Norm::l2 ? std::sqrt(partial) : partial;
      long double dot = 0.0L;
      for (std::size_t j = 0; j < n; ++j) dot += static_cast<long double>(x[j]) * static_cast<long double>(nu[j]);
      const long double dist = std::abs(dot - std::nearbyint(dot));
      const double bound = c / std::pow(len, q);
      ++cert.checked;
      if (static_cast<double>(dist) <= bound) {
        cert.violator = nu;
        cert.violator_distance = static_cast<double>(dist);
        cert.violator_bound = bound;
        return true;
      }
      return false;
    }
    const std::int64_t lo = all_zero ? 0 : -cutoff;
    for (std::int64_t v = lo; v <= cutoff; ++v) {
      const double a = std::abs(static_cast<double>(v));
      double next = partial;
      switch (norm) {
        case Norm::l1: next += a; break;
        case Norm::l2: next += a * a; break;
        case Norm::linf: next = std::max(next, a); break;
      }
      const double len = norm == Norm::l2 ? std::sqrt(next) : next;
      if (len > limit) continue;
      nu[i] = v;
      if (visit(i + 1, all_zero && v == 0, next)) return true;
    }
    nu[i] = 0;
    return false;
  };
  cert.verified = !visit(0, true, 0.0);
  return cert;
}

namespace {

void check_n(int n) {
  if (n < 1) throw DomainError("dimension n must be >= 1");
}

// sum_{i=0}^{n-2} (i+1)(2n-i), zero for n = 1.
double staircase_sum(int n) {
  double s = 0.0;
  for (int i = 0; i <= n - 2; ++i) s += static_cast<double>(i + 1) * static_cast<double>(2 * n - i);
  return s;
}

}  // namespace

double lambda_exponent(int n, double q) {
  check_n(n);
  const double nn = n;
  return (q + 1.0) * nn * (nn + 1.0) / 2.0 + q * staircase_sum(n) / 2.0;
}

double a_eps_exponent(int n, double q) {
  check_n(n);
  const double nn = n;
  return (q + 1.0) * nn * (nn + 1.0) + q * staircase_sum(n) + 1.0;
}

TBound t_bound(int n, double q, double c, double eps) {
  check_n(n);
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("t_bound: eps must lie in (0, 1/2)");
  if (n == 1) {
    if (!(c > 0.0)) throw DomainError("t_bound: c must be positive");
    return {1.0 / (c * std::pow(eps, q + 1.0)), true};
  }
  return {std::pow(1.0 / eps, lambda_exponent(n, q)), false};
}

ThresholdReport t_empirical(std::span<const double> a, double eps, std::uint64_t max_iter,
                            std::optional<BapParams> bap) {
  if (a.empty()) throw DomainError("t_empirical: empty vector");
  if (max_iter < 1) throw DomainError("t_empirical: max_iter must be >= 1");
  const std::size_t n = a.size();
  DensityGrid grid(n, eps);
  ThresholdReport rep;
  rep.a.assign(a.begin(), a.end());
  rep.eps = eps;
  rep.max_iter = max_iter;
  rep.grid_side = grid.side();
  rep.cells_total = grid.cells_total();
  rep.exponent = std::numeric_limits<double>::quiet_NaN();
  rep.bound_value = std::numeric_limits<double>::quiet_NaN();
  if (bap) {
    rep.exponent = lambda_exponent(static_cast<int>(n), bap->q);
    const auto b = t_bound(static_cast<int>(n), bap->q, bap->c, eps);
    rep.bound_value = b.value;
    rep.bound_exact = b.exact;
  }

  std::vector<double> point(n);
  for (std::uint64_t m = 1; m <= max_iter; ++m) {
    for (std::size_t j = 0; j < n; ++j) {
      const long double v = static_cast<long double>(m) * static_cast<long double>(a[j]);
      point[j] = static_cast<double>(v - std::floor(v));
    }
    grid.insert(point);
    if (grid.complete()) {
      rep.empirical_T = m;
      break;
    }
  }
  rep.cells_hit = grid.cells_hit();
  return rep;
}

RecursionStep recursion_step(int n, double q, double c, double c1, double eps) {
  if (n < 2) throw DomainError("recursion_step: requires n >= 2");
  if (!(c > 0.0) || !(c1 > 0.0) || !(q > 0.0)) throw DomainError("recursion_step: c, c1, q must be positive");
  if (!(eps > 0.0)) throw DomainError("recursion_step: eps must be positive");
  const double nn = n;
  RecursionStep s;
  s.q = q;
  s.factor = std::pow(c1, q + 1.0) / (c * std::pow(eps, nn * (q + 1.0)));
  s.c_next = c * std::pow(eps, nn * q) / (std::pow(c1, q) * std::pow(nn + 1.0, q));
  return s;
}

double unrolled_t_bound(int n, double q, double c, double c1, double eps) {
  check_n(n);
  double product = 1.0;
  for (int k = n; k >= 2; --k) {
    const auto s = recursion_step(k, q, c, c1, eps);
    product *= s.factor;
    c = s.c_next;
  }
  return product / (c * std::pow(eps, q + 1.0));
}

double pigeonhole_constant(int n, double eps) {
  check_n(n);
  if (!(eps > 0.0)) throw DomainError("pigeonhole_constant: eps must be positive");
  return std::pow(eps * std::ceil(1.0 / eps), n);
}

DilationThresholdReport dilation_threshold_experiment(const PolyCurve& curve, double eps,
                                                      std::span<const double> lambdas,
                                                      const DilationExperimentOptions& opt) {
  if (lambdas.empty()) throw DomainError("dilation_threshold_experiment: empty lambda schedule");
  const std::size_t n = curve.dim();
  DilationThresholdReport rep;
  rep.eps = eps;

  RealVec derivative(n);
  for (std::size_t j = 0; j < n; ++j) derivative[j] = curve.coeff(j, 1);
  rep.derivative_bap = bap_check(derivative, opt.bap.c, opt.bap.q, opt.cutoff, opt.norm);
  if (!rep.derivative_bap.verified)
    rep.warnings.push_back("derivative at 0 is not (c,q)-badly approximable at the scanned cutoff; violator " +
                           format_int_vec(*rep.derivative_bap.violator));
  rep.predicted_exponent = a_eps_exponent(static_cast<int>(n), opt.bap.q);
  rep.predicted_threshold = std::pow(eps, -rep.predicted_exponent);

  // Validates eps before the per-lambda work starts.
  DensityGrid probe(n, eps);
  (void)probe;

  rep.levels = parallel_map(lambdas.size(), opt.threads, [&](std::size_t i) {
    DilationLevel lv;
    lv.lambda = lambdas[i];
    lv.samples = opt.samples ? opt.samples : default_orbit_samples(curve, lv.lambda);
    const auto pts = project_orbit(curve, lv.lambda, lv.samples);
    const auto v = epsilon_dense(pts, eps);
    lv.cells_hit = v.cells_hit;
    lv.cells_total = v.cells_total;
    lv.certified = v.certified_dense;
    return lv;
  });
  for (const auto& lv : rep.levels) {
    if (lv.certified && (!rep.least_certified_lambda || lv.lambda < *rep.least_certified_lambda))
      rep.least_certified_lambda = lv.lambda;
  }
  return rep;
}

}  // namespace eqdist
