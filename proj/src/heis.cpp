#include "eqdist/heis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eqdist/errors.hpp"
#include "eqdist/parallel.hpp"
#include "eqdist/quadrature.hpp"

namespace eqdist {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_same_dim(const HeisPoint& g, const HeisPoint& h) {
  if (g.x.size() != h.x.size() || g.y.size() != g.x.size() || h.y.size() != h.x.size())
    throw DomainError("heis: dimension mismatch");
}

double dot(const RealVec& a, const RealVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::complex<double> cis(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Shifts v into [0,1) by an integer; returns the integer added.
double unit_shift(double& v) {
  double shift = -std::floor(v);
  double r = v + shift;
  if (r >= 1.0) {
    shift -= 1.0;
    r = v + shift;
  }
  if (r < 0.0) r = 0.0;
  v = r;
  return shift;
}

void validate(const Oscillator& s, std::size_t n) {
  if (s.m == 0) throw DomainError("oscillator: m must be nonzero");
  if (s.q.size() != n || s.h.size() != n) throw DomainError("oscillator: q and h must have dimension n");
  if (s.K < 0) throw DomainError("oscillator: K must be nonnegative");
  for (int hj : s.h)
    if (hj < 0 || hj > kMaxHermiteIndex) throw DomainError("oscillator: h_j must lie in [0, 60]");
}

std::complex<double> eval_raw(const EigenSpec& spec, const HeisPoint& g) {
  if (const auto* f = std::get_if<Horizontal>(&spec)) return eval_f(f->k, f->h, g);
  return eval_g(std::get<Oscillator>(spec), g);
}

// Fourth-order central second difference of t -> fn(t) at 0.
template <class Fn>
std::complex<double> second_difference(Fn&& fn, double step) {
  const auto f0 = fn(0.0);
  const auto p1 = fn(step), m1 = fn(-step), p2 = fn(2.0 * step), m2 = fn(-2.0 * step);
  return (-p2 + 16.0 * p1 - 30.0 * f0 + 16.0 * m1 - m2) / (12.0 * step * step);
}

}  // namespace

bool HeisPoint::reduced() const {
  auto in_unit = [](double v) { return v >= 0.0 && v < 1.0; };
  return std::all_of(x.begin(), x.end(), in_unit) && std::all_of(y.begin(), y.end(), in_unit) && in_unit(z);
}

HeisPoint HeisPoint::identity(std::size_t n) { return {RealVec(n, 0.0), RealVec(n, 0.0), 0.0}; }

HeisPoint heis_mul(const HeisPoint& g, const HeisPoint& h) {
  check_same_dim(g, h);
  HeisPoint out = g;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    out.x[i] += h.x[i];
    out.y[i] += h.y[i];
  }
  out.z = g.z + h.z + dot(g.x, h.y);
  return out;
}

HeisPoint heis_inv(const HeisPoint& g) {
  HeisPoint out = g;
  for (auto& v : out.x) v = -v;
  for (auto& v : out.y) v = -v;
  out.z = -g.z + dot(g.x, g.y);
  return out;
}

HeisPoint heis_dilate(const HeisPoint& g, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("heis_dilate: lambda must be positive");
  const double r = std::sqrt(lambda);
  HeisPoint out = g;
  for (auto& v : out.x) v *= r;
  for (auto& v : out.y) v *= r;
  out.z *= lambda;
  return out;
}

Reduction reduce_fundamental(const HeisPoint& g) {
  Reduction r;
  const std::size_t n = g.dim();
  r.gamma = HeisPoint::identity(n);
  r.reduced = g;
  for (std::size_t i = 0; i < n; ++i) {
    r.gamma.x[i] = unit_shift(r.reduced.x[i]);
    r.gamma.y[i] = unit_shift(r.reduced.y[i]);
  }
  // gamma g has z-coordinate z + c + <a, y> for gamma = (a, b, c).
  double z = g.z + dot(r.gamma.x, g.y);
  r.gamma.z = unit_shift(z);
  r.reduced.z = z;
  return r;
}

HeisCurve::HeisCurve(std::size_t n, std::size_t d, std::vector<double> coeffs)
    : n_(n), rows_(2 * n + 1, d, std::move(coeffs)) {
  if (n == 0) throw DomainError("HeisCurve: n must be positive");
}

HeisCurve::HeisCurve(std::size_t n, const RationalPolyCurve& rows)
    : n_(n), rows_(rows.to_real()), exact_(rows) {
  if (n == 0 || rows.dim() != 2 * n + 1) throw DomainError("HeisCurve: expected 2n+1 coefficient rows");
}

HeisPoint HeisCurve::at(double t) const {
  const auto p = rows_.eval(t);
  HeisPoint g;
  g.x.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n_));
  g.y.assign(p.begin() + static_cast<std::ptrdiff_t>(n_), p.begin() + static_cast<std::ptrdiff_t>(2 * n_));
  g.z = p[2 * n_];
  return g;
}

PolyCurve HeisCurve::horizontal() const {
  const auto d = rows_.degree();
  std::vector<double> c(rows_.coeffs().begin(), rows_.coeffs().begin() + static_cast<std::ptrdiff_t>(2 * n_ * d));
  return PolyCurve(2 * n_, d, std::move(c));
}

RationalPolyCurve HeisCurve::horizontal_exact() const {
  if (!exact_) return RationalPolyCurve::from_real(horizontal());
  const auto d = exact_->degree();
  std::vector<Rational> c(exact_->coeffs().begin(), exact_->coeffs().begin() + static_cast<std::ptrdiff_t>(2 * n_ * d));
  return RationalPolyCurve(2 * n_, d, std::move(c));
}

std::size_t spec_dim(const EigenSpec& spec) {
  if (const auto* f = std::get_if<Horizontal>(&spec)) return f->k.size();
  return std::get<Oscillator>(spec).q.size();
}

std::string spec_id(const EigenSpec& spec) {
  if (const auto* f = std::get_if<Horizontal>(&spec))
    return "f:k=" + format_int_vec(f->k) + ",h=" + format_int_vec(f->h);
  const auto& g = std::get<Oscillator>(spec);
  IntVec h(g.h.begin(), g.h.end());
  return "g:q=" + format_int_vec(g.q) + ",m=" + std::to_string(g.m) + ",h=" + format_int_vec(h);
}

EigenSpec parse_spec(const std::string& text) {
  auto fail = [&](const std::string& why) -> DomainError {
    return DomainError("bad eigenfunction spec '" + text + "': " + why);
  };
  if (text.size() < 2 || text[1] != ':' || (text[0] != 'f' && text[0] != 'g')) throw fail("expected f: or g: prefix");
  // Split on commas outside parentheses.
  std::vector<std::string> fields;
  std::string cur;
  int depth = 0;
  for (char ch : text.substr(2)) {
    if (ch == ' ') continue;
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) fields.push_back(cur);

  auto parse_vec = [&](const std::string& v) {
    if (v.size() < 2 || v.front() != '(' || v.back() != ')') throw fail("vector must be parenthesised");
    IntVec out;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw fail("bad integer '" + tok + "'");
      } catch (const std::invalid_argument&) {
        throw fail("bad integer '" + tok + "'");
      }
    }
    if (out.empty()) throw fail("empty vector");
    return out;
  };

  std::optional<IntVec> k, h, q;
  std::optional<std::int64_t> m;
  std::optional<int> K;
  for (const auto& f : fields) {
    const auto eq = f.find('=');
    if (eq == std::string::npos) throw fail("expected key=value");
    const std::string key = f.substr(0, eq), val = f.substr(eq + 1);
    try {
      if (key == "k") k = parse_vec(val);
      else if (key == "h") h = parse_vec(val);
      else if (key == "q") q = parse_vec(val);
      else if (key == "m") m = std::stoll(val);
      else if (key == "K") K = std::stoi(val);
      else throw fail("unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw fail("bad value for " + key);
    }
  }
  if (text[0] == 'f') {
    if (!k || !h) throw fail("horizontal spec needs k and h");
    if (k->size() != h->size()) throw fail("k and h differ in dimension");
    return Horizontal{*k, *h};
  }
  if (!q || !m || !h) throw fail("oscillator spec needs q, m and h");
  Oscillator o;
  o.q = *q;
  o.m = *m;
  for (auto v : *h) o.h.push_back(static_cast<int>(v));
  if (K) o.K = *K;
  validate(o, o.q.size());
  return o;
}

double hermite_F(int nu, double t) {
  if (nu < 0 || nu > kMaxHermiteIndex) throw DomainError("hermite_F: index must lie in [0, 60]");
  const double f0 = std::exp(-0.5 * t * t);
  if (nu == 0) return f0;
  double prev = f0, cur = 2.0 * t * f0;
  for (int k = 1; k < nu; ++k) {
    const double next = 2.0 * t * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::complex<double> eval_f(const IntVec& k, const IntVec& h, const HeisPoint& g) {
  if (k.size() != g.dim() || h.size() != g.dim()) throw DomainError("eval_f: dimension mismatch");
  double angle = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i)
    angle += static_cast<double>(k[i]) * g.x[i] + static_cast<double>(h[i]) * g.y[i];
  // Angles are taken mod 1 before scaling by 2 pi.
  angle -= std::floor(angle);
  return cis(kTwoPi * angle);
}

std::complex<double> eval_g(const Oscillator& spec, const HeisPoint& g) {
  const std::size_t n = g.dim();
  validate(spec, n);
  const double m = static_cast<double>(spec.m);
  const double scale = std::sqrt(kTwoPi * std::abs(m));

  double angle = m * g.z;
  for (std::size_t j = 0; j < n; ++j) angle += static_cast<double>(spec.q[j]) * g.y[j];
  angle -= std::floor(angle);
  std::complex<double> value = cis(kTwoPi * angle);

  for (std::size_t j = 0; j < n; ++j) {
    const int hj = spec.h[j];
    const double u = g.x[j] + static_cast<double>(spec.q[j]) / m;
    const double my = m * g.y[j];
    std::complex<double> sum{0.0, 0.0};
    for (int k = -spec.K; k <= spec.K; ++k) {
      const double w = scale * (u + k);
      double ph = k * my;
      ph -= std::floor(ph);
      sum += hermite_F(hj, w) * cis(kTwoPi * ph);
    }
    // Tail beyond |k| > K: walk outward on both sides until the terms are in
    // the monotone Gaussian regime and negligible.
    const double turning = std::sqrt(2.0 * hj + 1.0) + 1.0;
    const double tiny = 1e-3 * kLatticeTailTol * std::max(1.0, std::abs(sum));
    double tail = 0.0;
    for (int side : {1, -1}) {
      for (int step = 1; step <= 100000; ++step) {
        const int k = side * (spec.K + step);
        const double w = scale * (u + k);
        const double term = std::abs(hermite_F(hj, w));
        tail += term;
        if (side * w > turning && term < tiny) break;
      }
    }
    if (tail > kLatticeTailTol * std::max(1.0, std::abs(sum)))
      throw ResourceError("eval_g: lattice-sum tail " + std::to_string(tail) + " exceeds tolerance at K=" +
                          std::to_string(spec.K) + "; increase K or reduce the point first");
    value *= sum;
  }
  return value;
}

std::complex<double> eval_eigen(const EigenSpec& spec, const HeisPoint& g) {
  if (const auto* f = std::get_if<Horizontal>(&spec)) return eval_f(f->k, f->h, g);
  return eval_g(std::get<Oscillator>(spec), reduce_fundamental(g).reduced);
}

double eigenvalue(const EigenSpec& spec) {
  constexpr double pi = std::numbers::pi;
  if (const auto* f = std::get_if<Horizontal>(&spec)) {
    double s = 0.0;
    for (auto v : f->k) s += static_cast<double>(v) * static_cast<double>(v);
    for (auto v : f->h) s += static_cast<double>(v) * static_cast<double>(v);
    return -4.0 * pi * pi * s;
  }
  const auto& g = std::get<Oscillator>(spec);
  validate(g, g.q.size());
  const double am = std::abs(static_cast<double>(g.m));
  double hs = 0.0;
  for (int v : g.h) hs += 2.0 * v;
  return -2.0 * pi * am * (hs + static_cast<double>(g.q.size()) + 2.0 * pi * am);
}

double laplacian_residual(const EigenSpec& spec, const HeisPoint& g, double step) {
  if (!(step > 0.0)) throw DomainError("laplacian_residual: step must be positive");
  const std::size_t n = g.dim();
  if (spec_dim(spec) != n) throw DomainError("laplacian_residual: dimension mismatch");
  const auto f0 = eval_raw(spec, g);
  std::complex<double> lap{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    lap += second_difference(
        [&](double s) {
          HeisPoint p = g;
          p.x[j] += s;
          return eval_raw(spec, p);
        },
        step);
    lap += second_difference(
        [&](double s) {
          HeisPoint p = g;
          p.y[j] += s;
          p.z += s * g.x[j];
          return eval_raw(spec, p);
        },
        step);
  }
  lap += second_difference(
      [&](double s) {
        HeisPoint p = g;
        p.z += s;
        return eval_raw(spec, p);
      },
      step);
  const double ev = eigenvalue(spec);
  return std::abs(lap - ev * f0) / std::max(1.0, std::abs(ev * f0));
}

std::size_t default_nil_samples(const HeisCurve& curve, double lambda) {
  const double want = std::max(1e3, 50.0 * lambda * curve.rows().total_abs());
  return static_cast<std::size_t>(std::min(want, 1e7));
}

std::complex<double> nil_integral(const HeisCurve& curve, double lambda, const EigenSpec& spec, std::size_t samples) {
  if (!(lambda > 0.0)) throw DomainError("nil_integral: lambda must be positive");
  if (spec_dim(spec) != curve.dim()) throw DomainError("nil_integral: spec dimension differs from curve");
  if (samples < 1) throw DomainError("nil_integral: samples must be positive");
  static const GaussRule rule = gauss_legendre(16);
  const std::size_t panels = (samples + rule.nodes.size() - 1) / rule.nodes.size();
  const double width = 1.0 / static_cast<double>(panels);
  std::complex<double> total{0.0, 0.0};
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = (static_cast<double>(p) + 0.5) * width;
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = std::clamp(mid + 0.5 * width * rule.nodes[i], 0.0, 1.0);
      acc += rule.weights[i] * eval_eigen(spec, heis_dilate(curve.at(t), lambda));
    }
    total += 0.5 * width * acc;
  }
  return total;
}

NilEquiReport nil_equi_experiment(const HeisCurve& curve, std::span<const double> lambdas,
                                  std::span<const EigenSpec> specs, const NilEquiOptions& opt) {
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i - 1])) throw DomainError("nil_equi_experiment: lambda grid must be ascending");
  NilEquiReport rep;
  rep.lambdas.assign(lambdas.begin(), lambdas.end());
  rep.horizontal = equidistribution_dichotomy(curve.horizontal_exact());

  const std::size_t L = lambdas.size();
  const auto mags = parallel_map(specs.size() * L, opt.threads, [&](std::size_t idx) {
    const double lam = lambdas[idx % L];
    const std::size_t samples = opt.samples ? opt.samples : default_nil_samples(curve, lam);
    return std::abs(nil_integral(curve, lam, specs[idx / L], samples));
  });
  for (std::size_t s = 0; s < specs.size(); ++s) {
    SpecSeries series;
    series.id = spec_id(specs[s]);
    series.magnitudes.assign(mags.begin() + static_cast<std::ptrdiff_t>(s * L),
                             mags.begin() + static_cast<std::ptrdiff_t>((s + 1) * L));
    series.decreasing = L >= 2;
    for (std::size_t i = 1; i < L; ++i)
      if (!(series.magnitudes[i] < series.magnitudes[i - 1])) series.decreasing = false;
    if (std::holds_alternative<Oscillator>(specs[s]) && !series.decreasing) rep.oscillators_decay = false;
    rep.series.push_back(std::move(series));
  }

  if (rep.horizontal.witness) {
    const auto& w = *rep.horizontal.witness;
    const std::size_t n = curve.dim();
    Horizontal f{IntVec(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n)),
                 IntVec(w.begin() + static_cast<std::ptrdiff_t>(n), w.end())};
    rep.witness_magnitudes = parallel_map(L, opt.threads, [&](std::size_t i) {
      const std::size_t samples = opt.samples ? opt.samples : default_nil_samples(curve, lambdas[i]);
      return std::abs(nil_integral(curve, lambdas[i], f, samples));
    });
  }
  rep.consistent = !rep.horizontal.equidistributes || rep.oscillators_decay;
  return rep;
}

}  // namespace eqdist
