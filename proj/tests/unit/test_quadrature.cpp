#include "anisoent/quadrature.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace anisoent;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("finite interval integrals", "[quadrature]") {
  CHECK_THAT(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value,
             WithinRel(2.0, 1e-12));
  CHECK_THAT(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0).value, WithinRel(2.0 / 3.0, 1e-10));
  // Endpoint singularity.
  CHECK_THAT(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0).value, WithinRel(2.0, 1e-8));
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("kinks become panel edges", "[quadrature]") {
  const auto f = [](double x) { return std::abs(x - 0.3); };
  const auto with = integrate(f, 0.0, 1.0, default_quadrature_options(), {0.3});
  CHECK_THAT(with.value, WithinRel(0.5 * (0.09 + 0.49), 1e-14));
  CHECK(with.evaluations == 30);
}

TEST_CASE("semi-infinite integrals", "[quadrature]") {
  CHECK_THAT(integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0).value, WithinRel(1.0, 1e-10));
  CHECK_THAT(integrate_to_infinity([](double x) { return std::exp(-x * x); }, 0.0).value,
             WithinRel(0.5 * std::sqrt(std::numbers::pi), 1e-10));
  // Slow algebraic tail.
  CHECK_THAT(integrate_to_infinity([](double x) { return std::pow(1.0 + x, -1.5); }, 0.0).value,
             WithinRel(2.0, 1e-9));
  CHECK_THAT(integrate_to_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 3.0).value,
             WithinRel(0.5 * std::numbers::pi, 1e-9));
}

TEST_CASE("radial integration uses the polar decomposition", "[quadrature]") {
  // |S_2| int r e^{-r^2/2} dr = 2 pi.
  const auto e = integrate_radial([](double r) { return std::exp(-0.5 * r * r); }, 2.0, 2.0 * std::numbers::pi);
  CHECK_THAT(e.value, WithinRel(2.0 * std::numbers::pi, 1e-10));
  RadialDomain ball;
  ball.support = 2.0;
  const auto v = integrate_radial([](double) { return 1.0; }, 3.0, 4.0 * std::numbers::pi, ball);
  CHECK_THAT(v.value, WithinRel(4.0 / 3.0 * std::numbers::pi * 8.0, 1e-13));
}

TEST_CASE("quadrature failures", "[quadrature]") {
  CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, 0.0, 1.0), IntegrationError);
  QuadratureOptions tight;
  tight.max_intervals = 5;
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, tight), IntegrationError);
  tight.throw_on_failure = false;
  CHECK_FALSE(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, tight).converged);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("tolerance environment override", "[quadrature]") {
  ::setenv("ANISOENT_QUAD_TOL", "1e-6", 1);
  const auto o = default_quadrature_options();
  ::unsetenv("ANISOENT_QUAD_TOL");
  CHECK(o.rel_tol == 1e-6);
  CHECK(o.abs_tol == 1e-7);
  CHECK(default_quadrature_options().rel_tol == 1e-9);
}

TEST_CASE("monte carlo integration", "[quadrature]") {
  BoxSampler box(Point{{0.0, 0.0}}, Point{{2.0, 3.0}});
  const auto c = integrate_mc([](const Point&) { return 2.5; }, box, 10'000, 1);
  CHECK_THAT(c.value, WithinRel(2.5 * 6.0, 1e-13));
  GaussianSampler gauss(2, 1.5);
  const auto g = integrate_mc([](const Point& x) { return std::exp(-x.squaredNorm()); }, gauss, 200'000, 4);
  CHECK(std::abs(g.value - std::numbers::pi) < 4.0 * g.abs_error);
  const auto again = integrate_mc([](const Point& x) { return std::exp(-x.squaredNorm()); }, gauss, 200'000, 4);
  CHECK(again.value == g.value);
  CHECK_THROWS(integrate_mc([](const Point&) { return 1.0; }, box, 10, 1));
}
