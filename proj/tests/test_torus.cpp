#include <numbers>
#include <random>

#include "doctest.h"
#include "eqdist/errors.hpp"
#include "eqdist/torus.hpp"
#include "oracles.hpp"

using namespace eqdist;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double torus_dist(double a, double b) {
  double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

}  // namespace

TEST_CASE("fourier coefficient of a confined curve at its witness is 1") {
  PolyCurve c(2, 1, {1, 2});
  for (double lambda : {1.0, 17.3, 1e4})
    CHECK(std::abs(fourier_coeff(c, lambda, {2, -1}) - std::complex<double>(1, 0)) <= 1e-12);
}

TEST_CASE("fourier coefficients of (t, t^2) against Simpson") {
  PolyCurve c(2, 2, {1, 0, 0, 1});
  for (double lambda : {3.0, 40.0}) {
    for (IntVec nu : {IntVec{1, 0}, IntVec{0, 1}, IntVec{-2, 3}, IntVec{4, -4}}) {
      std::vector<double> a{kTwoPi * lambda * nu[0], kTwoPi * lambda * nu[1]};
      CHECK(std::abs(fourier_coeff(c, lambda, nu, 1e-12) - oracle::simpson_osc(a, 400'000)) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(fourier_coeff(c, 0.0, {1, 0}), DomainError);
}

TEST_CASE("nu box enumeration") {
  auto v = nu_box_vectors(2, 2);
  CHECK(v.size() == 24);
  CHECK(v.front() == IntVec{-2, -2});
  CHECK(v[1] == IntVec{-2, -1});
  CHECK(v.back() == IntVec{2, 2});
  CHECK(std::is_sorted(v.begin(), v.end()));
  CHECK(std::find(v.begin(), v.end(), IntVec{0, 0}) == v.end());
  CHECK(nu_box_vectors(3, 1).size() == 26);
  CHECK_THROWS_AS(nu_box_vectors(2, 0), DomainError);
}

TEST_CASE("decay sweep records and levels") {
  PolyCurve c(2, 2, {1, 0, 0, 1});
  std::vector<double> lambdas{10.0, 100.0, 1000.0};
  DecaySweepOptions opt;
  opt.nu_box = 2;
  opt.vdc_constant = 3.0;
  auto rep = decay_sweep(c, lambdas, opt);
  REQUIRE(rep.records.size() == 3 * 24);
  CHECK(rep.levels.size() == 3);
  CHECK(rep.vdc_constant == 3.0);
  CHECK(rep.failed_records == 0);
  for (const auto& r : rep.records) {
    CHECK(r.coeff_mag == doctest::Approx(std::abs(r.coeff)));
    const double w = r.lambda * l1_norm(r.nu);
    CHECK(r.normalized == doctest::Approx(std::sqrt(w) * r.coeff_mag));
    // Van der Corput with the phase's own weight 2 pi lambda ||nu||_1.
    CHECK(r.vdc_reference == doctest::Approx(3.0 / std::sqrt(kTwoPi * w)));
  }
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    double sup = 0.0;
    for (const auto& r : rep.records)
      if (r.lambda == lambdas[i]) sup = std::max(sup, r.coeff_mag);
    CHECK(rep.levels[i].sup_coeff_mag == sup);
  }
  // Thread count does not change results.
  opt.threads = 3;
  auto rep3 = decay_sweep(c, lambdas, opt);
  for (std::size_t i = 0; i < rep.records.size(); ++i) CHECK(rep.records[i].coeff == rep3.records[i].coeff);

  std::vector<double> desc{100.0, 10.0};
  CHECK_THROWS_AS(decay_sweep(c, desc, opt), DomainError);
  std::vector<double> neg{-1.0};
  CHECK_THROWS_AS(decay_sweep(c, neg, opt), DomainError);
}

TEST_CASE("degenerate sweep keeps witness records at magnitude 1") {
  PolyCurve c(2, 1, {1, 2});
  std::vector<double> lambdas{10.0, 100.0, 1000.0};
  DecaySweepOptions opt;
  opt.nu_box = 2;
  opt.vdc_constant = 2.0;
  auto rep = decay_sweep(c, lambdas, opt);
  for (const auto& r : rep.records)
    if (r.nu == IntVec{2, -1} || r.nu == IntVec{-2, 1}) {
      CHECK(r.coeff_mag == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::isinf(r.vdc_reference));
    }
  CHECK(rep.degree_below_dim);
  // Flat supremum: fitted slope near zero.
  auto fit = fit_decay_exponent(rep.levels);
  CHECK(std::abs(fit.slope) < 1e-9);
}

TEST_CASE("fit and spread input checks") {
  std::vector<DecayLevel> two(2);
  two[0] = {1.0, 0.5, 0.5, 0.5};
  two[1] = {2.0, 0.4, 0.4, 0.4};
  CHECK_THROWS_AS(fit_decay_exponent(two), InsufficientDataError);
  std::vector<DecayLevel> none;
  CHECK_THROWS_AS(normalized_spread(none), InsufficientDataError);
  std::vector<DecayLevel> lv{{1, 1, 1, 1.0}, {2, 1, 1, 2.0}, {3, 1, 1, 4.0}};
  CHECK(normalized_spread(lv) == doctest::Approx(2.0));
}

TEST_CASE("project_orbit lands in the unit cube") {
  PolyCurve c(2, 2, {1, 0.5, -0.3, 1});
  auto pts = project_orbit(c, 37.0, 1001);
  REQUIRE(pts.size() == 1001);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (double v : pts[i]) {
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
    }
  // t = 1 maps to frac(37 * (1.5, 0.7)).
  CHECK(pts[1000][0] == doctest::Approx(0.5));
  CHECK(pts[1000][1] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(default_orbit_samples(c, 1.0) == 1000);
  CHECK(default_orbit_samples(c, 1e9) == 10'000'000);
  CHECK_THROWS_AS(project_orbit(c, 1.0, 1), DomainError);
}

TEST_CASE("density grid certification") {
  DensityGrid g(2, 0.1);
  CHECK(g.cells_per_axis() == 16);  // 2^ceil(log2(sqrt 2 / 0.1))
  CHECK(g.side() * std::sqrt(2.0) <= 0.1);
  CHECK_THROWS_AS(DensityGrid(2, 0.5), DomainError);
  CHECK_THROWS_AS(DensityGrid(2, 0.0), DomainError);
  CHECK_THROWS_AS(DensityGrid(8, 0.01), ResourceError);

  // A uniform lattice of cell centers certifies density.
  const std::size_t m = g.cells_per_axis();
  PointSet pts(2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> p{(i + 0.5) / m, (j + 0.5) / m};
      pts.push_back(p);
    }
  auto v = epsilon_dense(pts, 0.1);
  CHECK(v.certified_dense);
  CHECK(v.cells_hit == v.cells_total);
  CHECK_FALSE(v.witness.has_value());
}

TEST_CASE("density witness is far from every sample") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  PointSet pts(2);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> p{u(rng), u(rng)};
    pts.push_back(p);
  }
  auto v = epsilon_dense(pts, 0.05);
  CHECK_FALSE(v.certified_dense);
  REQUIRE(v.witness.has_value());
  const auto& w = *v.witness;
  // The deepest empty region sits near (0.75, 0.75).
  CHECK(torus_dist(w[0], 0.75) < 0.1);
  CHECK(torus_dist(w[1], 0.75) < 0.1);
  double nearest = 1.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    nearest = std::min(nearest, std::max(torus_dist(pts[i][0], w[0]), torus_dist(pts[i][1], w[1])));
  CHECK(nearest >= v.grid_side / 2);
  CHECK_THROWS_AS(epsilon_dense(PointSet(2), 0.1), DomainError);
}

TEST_CASE("orbit of a confined curve is never certified") {
  PolyCurve c(2, 1, {1, 2});
  for (double lambda : {10.0, 1e3, 1e5}) {
    auto v = epsilon_dense(project_orbit(c, lambda, 200'000), 0.1);
    CHECK_FALSE(v.certified_dense);
    REQUIRE(v.witness.has_value());
    // The witness is off the line 2x - y = 0 mod 1.
    const double r = 2 * (*v.witness)[0] - (*v.witness)[1];
    CHECK(torus_dist(r - std::floor(r), 0.0) > 0.05);
  }
}

TEST_CASE("orbit of (t, t^2) becomes dense") {
  PolyCurve c(2, 2, {1, 0, 0, 1});
  auto v = epsilon_dense(project_orbit(c, 1e3, default_orbit_samples(c, 1e3)), 0.1);
  CHECK(v.certified_dense);
}

TEST_CASE("dichotomy") {
  auto conf = equidistribution_dichotomy(parse_rational_curve("n=2; d=1; coeffs=1, 2"));
  CHECK_FALSE(conf.equidistributes);
  REQUIRE(conf.witness.has_value());
  CHECK(*conf.witness == IntVec{2, -1});
  auto eq = equidistribution_dichotomy(parse_rational_curve("n=2; d=2; coeffs=1, 0, 0, 1"));
  CHECK(eq.equidistributes);
  CHECK_FALSE(eq.witness.has_value());
  // Three coordinates, two relations.
  auto two = equidistribution_dichotomy(parse_rational_curve("n=3; d=1; coeffs=1, 2, 3"));
  CHECK(two.kernel_basis.size() == 2);
}
