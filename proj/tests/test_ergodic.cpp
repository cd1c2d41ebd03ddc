#include <numbers>

#include "doctest.h"
#include "eqdist/ergodic.hpp"
#include "eqdist/errors.hpp"
#include "oracles.hpp"

using namespace eqdist;

namespace {

// |int_0^1 exp(i a t) dt| = |sin(a/2) / (a/2)|.
double sinc_abs(double a) { return a == 0.0 ? 1.0 : std::abs(std::sin(0.5 * a) / (0.5 * a)); }

AtomicSpectralMeasure two_atoms() {
  AtomicSpectralMeasure m;
  m.add({{1.0}, 0.5});
  m.add({{std::sqrt(2.0)}, 0.5});
  return m;
}

}  // namespace

TEST_CASE("psi for the line matches the closed form") {
  PolyCurve line(1, 1, {1.0});
  for (double lambda : {0.5, 3.0, 77.7, 1e4})
    for (double y : {-2.0, 0.3, 1.0, std::sqrt(2.0)}) {
      const RealVec v{y};
      CHECK(psi(lambda, v, line) == doctest::Approx(sinc_abs(lambda * y)).epsilon(1e-10).scale(1e-12));
    }
  const RealVec zero{0.0};
  CHECK(psi(5.0, zero, line) == doctest::Approx(1.0));
  CHECK_THROWS_AS(psi(0.0, zero, line), DomainError);
}

TEST_CASE("psi for a quadratic curve matches Simpson") {
  PolyCurve c(2, 2, {1.0, 0.5, -0.25, 1.0});
  const std::vector<std::vector<double>> rows{{1.0, 0.5}, {-0.25, 1.0}};
  for (double lambda : {2.0, 40.0})
    for (RealVec y : {RealVec{1.0, 0.0}, RealVec{0.3, -0.7}}) {
      CHECK(std::abs(psi(lambda, y, c) - oracle::curve_psi(lambda, y, rows)) <= 1e-9);
    }
}

TEST_CASE("norm of the ergodic average") {
  PolyCurve line(1, 1, {1.0});
  auto m = two_atoms();
  for (double lambda : {1.0, 10.0, 1000.0}) {
    const double want = std::sqrt(0.5 * std::pow(sinc_abs(lambda), 2) + 0.5 * std::pow(sinc_abs(lambda * std::sqrt(2.0)), 2));
    CHECK(norm_x_lambda(m, line, lambda) == doctest::Approx(want).epsilon(1e-10));
  }
  // Invariant vectors keep their mass.
  m.add({{0.0}, 0.25});
  CHECK(m.has_zero_atom());
  CHECK(m.zero_mass() == 0.25);
  CHECK(m.total_mass() == 1.25);
  CHECK(norm_x_lambda(m, line, 1e6) >= 0.5);
  CHECK(norm_x_lambda(m, line, 1e6) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("atoms must carry positive weight") {
  AtomicSpectralMeasure m;
  CHECK_THROWS_AS(m.add({{1.0}, 0.0}), DomainError);
  CHECK_THROWS_AS(m.add({{1.0}, -1.0}), DomainError);
  m.add({{1.0}, 1.0});
  CHECK_THROWS_AS(m.add({{1.0, 2.0}, 1.0}), DomainError);
}

TEST_CASE("integrability value") {
  PolyCurve line(1, 1, {1.0});
  auto v = integrability_value(two_atoms(), line);
  CHECK_FALSE(v.infinite);
  CHECK(v.value == doctest::Approx(0.5 + 0.25));
  auto m = two_atoms();
  m.add({{0.0}, 0.1});
  CHECK(integrability_value(m, line).infinite);
  // Degree 2 weights ||A* y||_1^(-1).
  PolyCurve c(1, 2, {1.0, 1.0});
  AtomicSpectralMeasure one;
  one.add({{2.0}, 1.0});
  CHECK(integrability_value(one, c).value == doctest::Approx(0.25));
}

TEST_CASE("uniform box measure against quadrature in y") {
  auto box = AtomicSpectralMeasure::uniform_box({1.0}, {2.0}, 1.0, 64);
  CHECK(box.atoms().size() == 64);
  CHECK(box.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
  PolyCurve line(1, 1, {1.0});
  const double lambda = 7.0;
  // int_1^2 sinc^2 dy by Simpson.
  const int n = 20000;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double y = 1.0 + static_cast<double>(i) / n;
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    s += w * std::pow(sinc_abs(lambda * y), 2);
  }
  s /= 3.0 * n;
  CHECK(norm_x_lambda(box, line, lambda) == doctest::Approx(std::sqrt(s)).epsilon(1e-10));
  auto box2 = AtomicSpectralMeasure::uniform_box({0.0, 0.0}, {1.0, 2.0}, 3.0, 5);
  CHECK(box2.atoms().size() == 25);
  CHECK(box2.total_mass() == doctest::Approx(3.0));
  CHECK_THROWS_AS(AtomicSpectralMeasure::uniform_box({1.0}, {0.5}, 1.0, 4), DomainError);
}

TEST_CASE("decay demo on the line") {
  PolyCurve line(1, 1, {1.0});
  auto lambdas = log_spaced(10.0, 1e4, 20);
  auto rep = decay_demo(two_atoms(), line, lambdas);
  CHECK(rep.curve_nondegenerate);
  CHECK(rep.asserted);
  CHECK(rep.passed);
  REQUIRE(rep.fit.has_value());
  CHECK(rep.fit->slope <= -0.85);
  CHECK(rep.slope_limit == doctest::Approx(-0.85));

  auto m = two_atoms();
  m.add({{0.0}, 0.25});
  auto rep0 = decay_demo(m, line, lambdas);
  CHECK(rep0.degenerate_atoms == 1);
  CHECK(rep0.asserted);
  CHECK(rep0.passed);
  for (const auto& r : rep0.rows) CHECK(r.norm >= 0.5 - 1e-6);
  CHECK(rep0.integrability.infinite);
}

TEST_CASE("decay demo on a degenerate curve makes no claim") {
  PolyCurve c(2, 1, {1.0, 2.0});
  AtomicSpectralMeasure m;
  m.add({{2.0, -1.0}, 1.0});
  m.add({{1.0, 0.0}, 1.0});
  auto rep = decay_demo(m, c, log_spaced(10.0, 1e3, 5));
  CHECK_FALSE(rep.curve_nondegenerate);
  CHECK_FALSE(rep.asserted);
  CHECK(rep.passed);
  CHECK(rep.degenerate_atoms == 1);
  for (const auto& r : rep.rows) CHECK(r.norm >= 1.0 - 1e-9);
  std::vector<double> two{1.0, 2.0};
  CHECK_THROWS_AS(decay_demo(m, c, two), DomainError);
}
