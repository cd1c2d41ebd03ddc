#include "eqdist/torus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "eqdist/errors.hpp"
#include "eqdist/oscint.hpp"
#include "eqdist/parallel.hpp"

namespace eqdist {

namespace {

PolyPhase torus_phase(const PolyCurve& curve, double lambda, const IntVec& nu) {
  auto c = curve.apply_transpose(std::span<const std::int64_t>(nu));
  const double scale = 2.0 * std::numbers::pi * lambda;
  for (double& a : c) a *= scale;
  return PolyPhase(std::move(c));
}

double frac(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

}  // namespace

std::complex<double> fourier_coeff(const PolyCurve& curve, double lambda, const IntVec& nu, double tol) {
  if (!(lambda > 0.0)) throw DomainError("fourier_coeff: lambda must be positive");
  return osc_integral(torus_phase(curve, lambda, nu), tol).value;
}

std::vector<IntVec> nu_box_vectors(std::size_t dim, int box) {
  if (box < 1) throw DomainError("nu_box must be >= 1");
  if (dim == 0) throw DomainError("nu_box_vectors: dimension must be positive");
  std::vector<IntVec> out;
  IntVec nu(dim, -box);
  for (;;) {
    if (std::any_of(nu.begin(), nu.end(), [](std::int64_t v) { return v != 0; })) out.push_back(nu);
    std::size_t i = dim;
    while (i-- > 0) {
      if (nu[i] < box) {
        ++nu[i];
        break;
      }
      nu[i] = -box;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

DecayReport decay_sweep(const PolyCurve& curve, std::span<const double> lambdas, const DecaySweepOptions& opt) {
  if (lambdas.empty()) throw DomainError("decay_sweep: lambda grid is empty");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0)) throw DomainError("decay_sweep: lambda must be positive");
    if (i && !(lambdas[i] > lambdas[i - 1])) throw DomainError("decay_sweep: lambda grid must be ascending");
  }
  if (!(opt.tol > 0.0)) throw DomainError("decay_sweep: tol must be positive");

  DecayReport rep;
  rep.nu_box = opt.nu_box;
  rep.tol = opt.tol;
  rep.degree_below_dim = curve.degree_below_dim();
  const auto d = static_cast<double>(curve.degree());
  rep.vdc_constant = opt.vdc_constant ? *opt.vdc_constant
                                      : vdc_constant_probe(curve.degree(), opt.probe_samples, opt.probe_seed,
                                                           opt.tol, opt.threads);

  const auto nus = nu_box_vectors(curve.dim(), opt.nu_box);
  const std::size_t total = lambdas.size() * nus.size();
  rep.records = parallel_map(total, opt.threads, [&](std::size_t idx) {
    DecayRecord r;
    r.lambda = lambdas[idx / nus.size()];
    r.nu = nus[idx % nus.size()];
    const auto phase = torus_phase(curve, r.lambda, r.nu);
    QuadratureResult q;
    try {
      q = osc_integral(phase, opt.tol);
    } catch (const QuadratureBudgetError& e) {
      q = e.best();
      r.failed = true;
    }
    r.coeff = q.value;
    r.est_error = q.est_error;
    r.coeff_mag = std::abs(q.value);
    const double at_nu = l1_norm(curve.apply_transpose(std::span<const std::int64_t>(r.nu)));
    r.vdc_reference = phase.total_abs() > 0.0 ? vdc_bound(phase, rep.vdc_constant)
                                              : std::numeric_limits<double>::infinity();
    r.normalized = std::pow(r.lambda * at_nu, 1.0 / d) * r.coeff_mag;
    return r;
  });

  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    DecayLevel lv;
    lv.lambda = lambdas[li];
    for (std::size_t k = 0; k < nus.size(); ++k) {
      const auto& r = rep.records[li * nus.size() + k];
      if (r.failed) {
        ++rep.failed_records;
        continue;
      }
      lv.sup_coeff_mag = std::max(lv.sup_coeff_mag, r.coeff_mag);
      lv.sup_weighted = std::max(lv.sup_weighted, std::pow(l1_norm(r.nu), 1.0 / d) * r.coeff_mag);
    }
    lv.sup_normalized = std::pow(lv.lambda, 1.0 / d) * lv.sup_weighted;
    rep.levels.push_back(lv);
  }
  return rep;
}

PowerLawFit fit_decay_exponent(std::span<const DecayLevel> levels, double tol) {
  std::vector<double> distinct;
  for (const auto& l : levels)
    if (std::find(distinct.begin(), distinct.end(), l.lambda) == distinct.end()) distinct.push_back(l.lambda);
  if (distinct.size() < 3) throw InsufficientDataError("fit_decay_exponent: need at least three distinct lambdas");
  std::vector<double> xs, ys;
  for (const auto& l : levels) {
    if (l.sup_coeff_mag <= tol) continue;
    xs.push_back(l.lambda);
    ys.push_back(l.sup_coeff_mag);
  }
  if (xs.size() < 3) throw InsufficientDataError("fit_decay_exponent: fewer than three usable levels");
  return fit_log_log(xs, ys);
}

double normalized_spread(std::span<const DecayLevel> levels) {
  if (levels.empty()) throw InsufficientDataError("normalized_spread: no levels");
  std::vector<double> v;
  for (const auto& l : levels) v.push_back(l.sup_normalized);
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return v.back() / median;
}

PointSet::PointSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0 || coords_.size() % dim_ != 0) throw DomainError("PointSet: coordinate count not a multiple of dim");
}

void PointSet::push_back(std::span<const double> p) {
  if (p.size() != dim_) throw DomainError("PointSet: dimension mismatch");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

std::size_t default_orbit_samples(const PolyCurve& curve, double lambda) {
  const double want = std::max(1e3, 50.0 * lambda * curve.total_abs());
  return static_cast<std::size_t>(std::min(want, 1e7));
}

PointSet project_orbit(const PolyCurve& curve, double lambda, std::size_t samples) {
  if (samples < 2) throw DomainError("project_orbit: need at least two samples");
  if (!(lambda > 0.0)) throw DomainError("project_orbit: lambda must be positive");
  const auto n = curve.dim();
  std::vector<double> coords;
  coords.reserve(samples * n);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
    const auto p = curve.eval(t);
    for (double x : p) coords.push_back(frac(lambda * x));
  }
  return PointSet(n, std::move(coords));
}

DensityGrid::DensityGrid(std::size_t dim, double eps) : dim_(dim) {
  if (dim == 0) throw DomainError("DensityGrid: dimension must be positive");
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("epsilon must lie in (0, 1/2)");
  const double need = std::sqrt(static_cast<double>(dim)) / eps;
  m_ = 1;
  while (static_cast<double>(m_) < need) m_ *= 2;
  double cells = 1.0;
  for (std::size_t i = 0; i < dim; ++i) cells *= static_cast<double>(m_);
  if (cells > static_cast<double>(kMaxDensityCells))
    throw ResourceError("density grid needs " + std::to_string(cells) + " cells (limit 1e8); raise eps or lower n");
  hit_.assign(static_cast<std::size_t>(cells), false);
}

bool DensityGrid::insert(std::span<const double> point) {
  if (point.size() != dim_) throw DomainError("DensityGrid: dimension mismatch");
  std::size_t idx = 0;
  for (double x : point) {
    auto c = static_cast<std::size_t>(frac(x) * static_cast<double>(m_));
    if (c >= m_) c = m_ - 1;
    idx = idx * m_ + c;
  }
  if (hit_[idx]) return false;
  hit_[idx] = true;
  ++hits_;
  return true;
}

std::optional<RealVec> DensityGrid::witness() const {
  if (complete()) return std::nullopt;
  const std::size_t total = hit_.size();
  std::size_t best = total;
  if (hits_ > 0 && total <= (std::size_t{1} << 24)) {
    // Multi-source BFS over the cell torus from all hit cells.
    std::vector<std::uint32_t> dist(total, std::numeric_limits<std::uint32_t>::max());
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < total; ++i)
      if (hit_[i]) {
        dist[i] = 0;
        queue.push_back(i);
      }
    std::vector<std::size_t> stride(dim_, 1);
    for (std::size_t a = dim_ - 1; a-- > 0;) stride[a] = stride[a + 1] * m_;
    std::uint32_t far = 0;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      for (std::size_t a = 0; a < dim_; ++a) {
        const std::size_t coord = (cur / stride[a]) % m_;
        for (int dir : {-1, 1}) {
          const std::size_t nc = (coord + m_ + dir) % m_;
          const std::size_t nb = cur + (nc - coord) * stride[a];
          if (dist[nb] != std::numeric_limits<std::uint32_t>::max()) continue;
          dist[nb] = dist[cur] + 1;
          if (dist[nb] > far) {
            far = dist[nb];
            best = nb;
          }
          queue.push_back(nb);
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < total; ++i)
      if (!hit_[i]) {
        best = i;
        break;
      }
  }
  if (best == total) best = 0;
  RealVec center(dim_);
  std::size_t rem = best;
  for (std::size_t a = dim_; a-- > 0;) {
    center[a] = (static_cast<double>(rem % m_) + 0.5) / static_cast<double>(m_);
    rem /= m_;
  }
  return center;
}

DensityVerdict verdict_from_grid(const DensityGrid& grid, double eps) {
  DensityVerdict v;
  v.eps = eps;
  v.grid_side = grid.side();
  v.cells_total = grid.cells_total();
  v.cells_hit = grid.cells_hit();
  v.certified_dense = grid.complete();
  v.witness = grid.witness();
  return v;
}

DensityVerdict epsilon_dense(const PointSet& points, double eps) {
  if (points.empty()) throw DomainError("epsilon_dense: point set is empty");
  DensityGrid grid(points.dim(), eps);
  for (std::size_t i = 0; i < points.size() && !grid.complete(); ++i) grid.insert(points[i]);
  return verdict_from_grid(grid, eps);
}

Dichotomy equidistribution_dichotomy(const RationalPolyCurve& curve) {
  Dichotomy d;
  d.kernel_basis = rational_kernel_basis(curve);
  d.equidistributes = d.kernel_basis.empty();
  if (!d.equidistributes) d.witness = d.kernel_basis.front();
  return d;
}

}  // namespace eqdist
