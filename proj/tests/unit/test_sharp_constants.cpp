#include "anisoent/quadrature.hpp"
#include "anisoent/sharp_constants.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace anisoent;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double e = std::numbers::e;

double euclidean_sphere(int n) { return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n); }

}  // namespace

TEST_CASE("desk-check constants", "[constants]") {
  CHECK_THAT(sharp_renyi_constant({2.0, 2.0}, 1.0, 2.0).K, WithinRel(125.0 / 9.0, 1e-12));
  CHECK_THAT(sharp_renyi_constant({0.5, 2.0}, 1.0, 2.0).K, WithinRel(4.0 * pi * pi, 1e-12));
}

TEST_CASE("normalizing constants against references", "[constants]") {
  CHECK_THAT(c1({0.8, 2.0}, 2.0, 2.0 * pi), WithinRel(4.0 / pi, 1e-13));
  CHECK_THAT(c2({2.0, 2.0}, 3.0, 4.0 * pi), WithinRel(15.0 / (8.0 * pi), 1e-13));
  CHECK_THAT(c2({3.0, 1.0}, 2.0, 2.0 * pi), WithinRel(0.5968310365946075091, 1e-13));
  CHECK_THAT(phi2_alpha_norm({3.0, 1.0}, 2.0, 2.0 * pi), WithinRel(0.1526602655325401690, 1e-13));
  CHECK_THROWS_AS(c1({2.0, 2.0}, 1.0, 2.0), InvalidParameters);
  CHECK_THROWS_AS(c2({0.5, 2.0}, 1.0, 2.0), InvalidParameters);
}

TEST_CASE("normalizing constants integrate the profiles to one", "[constants]") {
  for (double Q : {1.0, 2.5, 4.0}) {
    for (double b : {1.0, 2.0, 3.0}) {
      const double S = 1.7;
      const EntropyParams lo{0.9, b};
      const double C1 = c1(lo, Q, S);
      const auto m1 = integrate_radial([&](double r) { return C1 * std::pow(1.0 + std::pow(r, b), 1.0 / (lo.alpha - 1.0)); },
                                       Q, S);
      CHECK_THAT(m1.value, WithinRel(1.0, 1e-9));
      const EntropyParams hi{2.5, b};
      const double C2 = c2(hi, Q, S);
      RadialDomain unit;
      unit.support = 1.0;
      const auto m2 = integrate_radial([&](double r) { return C2 * std::pow(1.0 - std::pow(r, b), 1.0 / (hi.alpha - 1.0)); },
                                       Q, S, unit);
      CHECK_THAT(m2.value, WithinRel(1.0, 1e-9));
    }
  }
}

TEST_CASE("parameter validation", "[constants]") {
  try {
    sharp_renyi_constant({0.5, 1.0}, 1.0, 2.0);
    FAIL("expected InvalidParameters");
  } catch (const InvalidParameters& ex) {
    CHECK(std::string(ex.what()) == "invalid: b <= Q(1/alpha-1)");
  }
  CHECK_THROWS_AS(sharp_renyi_constant({1.0, 2.0}, 1.0, 2.0), InvalidParameters);
  CHECK_THROWS_AS(sharp_renyi_constant({-1.0, 2.0}, 1.0, 2.0), InvalidParameters);
  CHECK_THROWS_AS(sharp_renyi_constant({2.0, 0.0}, 1.0, 2.0), InvalidParameters);
  CHECK_THROWS_AS(sharp_renyi_constant({2.0, 2.0}, 1.0, -2.0), InvalidParameters);
  CHECK_NOTHROW(sharp_renyi_constant({0.5, 1.0001}, 1.0, 2.0));
}

TEST_CASE("equality at the extremizer from closed forms", "[constants]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ua(0.2, 6.0), ub(0.3, 5.0), uq(0.5, 8.0), us(0.1, 30.0);
  int checked = 0;
  while (checked < 300) {
    const EntropyParams p{ua(rng), ub(rng)};
    const double Q = uq(rng), S = us(rng);
    if (std::abs(p.alpha - 1.0) < 1e-3) continue;
    try {
      p.validate(Q);
    } catch (const InvalidParameters&) {
      continue;
    }
    const auto k = sharp_renyi_constant(p, Q, S);
    const double h = std::log(k.ingredients.extremizer_alpha_norm) / (1.0 - p.alpha);
    const double rhs = (Q / p.b) * (k.log_K + std::log(k.ingredients.extremizer_moment));
    CHECK_THAT(rhs - h, WithinAbs(0.0, 1e-10 * std::max(1.0, std::abs(h))));
    ++checked;
  }
}

TEST_CASE("A_stated reproduces K below one", "[constants]") {
  for (double a : {0.6, 0.8, 0.95}) {
    const auto k = sharp_renyi_constant({a, 2.0}, 2.0, 2.0 * pi);
    CHECK_THAT(k.K, WithinRel(std::pow(k.A_stated, 2.0 / 2.0), 1e-12));
  }
}

TEST_CASE("K tends to C_G as alpha tends to one", "[constants]") {
  for (double Q : {1.0, 2.0, 4.0}) {
    const double S = euclidean_sphere(static_cast<int>(Q));
    const double cg = shannon_constant(Q, S);
    double prev_lo = INFINITY, prev_hi = INFINITY;
    for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double lo = std::abs(sharp_renyi_constant({1.0 - d, 2.0}, Q, S).K / cg - 1.0);
      const double hi = std::abs(sharp_renyi_constant({1.0 + d, 2.0}, Q, S).K / cg - 1.0);
      CHECK(lo < prev_lo);
      CHECK(hi < prev_hi);
      prev_lo = lo;
      prev_hi = hi;
    }
    CHECK(prev_lo < 1e-4);
    CHECK(prev_hi < 1e-4);
  }
  // Reference ratios at alpha = 1 -+ 1e-3, Q = 1.
  CHECK_THAT(sharp_renyi_constant({0.999, 2.0}, 1.0, 2.0).K / shannon_constant(1.0, 2.0),
             WithinRel(1.000500835, 1e-9));
  CHECK_THAT(sharp_renyi_constant({1.001, 2.0}, 1.0, 2.0).K / shannon_constant(1.0, 2.0),
             WithinRel(0.999500832, 1e-9));
}

TEST_CASE("shannon constant on R^n", "[constants]") {
  for (int n = 1; n <= 6; ++n) {
    CHECK_THAT(shannon_constant(n, euclidean_sphere(n)), WithinRel(2.0 * e * pi / n, 1e-13));
  }
}

TEST_CASE("log-Sobolev constants and uncertainty bound", "[constants]") {
  CHECK_THAT(log_sobolev_constant(LogSobolevGroup::heisenberg, 1), WithinRel(1.0 / pi, 1e-14));
  CHECK_THAT(log_sobolev_constant(LogSobolevGroup::heisenberg, 2),
             WithinRel(std::cbrt(2.0) / (4.0 * pi), 1e-14));
  CHECK_THAT(log_sobolev_constant(LogSobolevGroup::euclidean, 3), WithinRel(0.7351051938957227327, 1e-14));
  CHECK_THAT(log_sobolev_constant(LogSobolevGroup::euclidean, 3),
             WithinRel(std::pow(3.0 * pi, -0.5) * 4.0 / std::sqrt(pi), 1e-14));
  CHECK_THROWS_AS(log_sobolev_constant(LogSobolevGroup::euclidean, 2), InvalidParameters);
  CHECK_THROWS_AS(log_sobolev_constant(LogSobolevGroup::euclidean, 1), InvalidParameters);
  CHECK_THROWS_AS(log_sobolev_constant(LogSobolevGroup::heisenberg, 0), InvalidParameters);
  CHECK(log_sobolev_constant(LogSobolevGroup::custom, 0, 0.25) == 0.25);
  CHECK_THROWS_AS(log_sobolev_constant(LogSobolevGroup::custom, 0, -1.0), InvalidParameters);
  const double A3 = log_sobolev_constant(LogSobolevGroup::euclidean, 3);
  CHECK_THAT(uncertainty_bound(3.0, 4.0 * pi, A3), WithinRel(3.0 * std::sqrt(3.0) / (2.0 * e), 1e-13));
}

TEST_CASE("optimal dilations minimize the objectives", "[constants]") {
  const double S = 2.0 * pi;
  for (const EntropyParams p : {EntropyParams{0.7, 2.0}, EntropyParams{0.9, 1.0}, EntropyParams{2.0, 2.0},
                                EntropyParams{3.0, 1.5}}) {
    const double Q = 2.0;
    const double moment = 0.8;
    const double norm = 0.6;
    const double l = optimal_dilation(p, Q, S, moment, norm);
    const double best = dilation_objective(p, Q, S, moment, norm, l);
    for (double f : {0.5, 0.9, 0.999, 1.001, 1.1, 2.0}) {
      CHECK(dilation_objective(p, Q, S, moment, norm, l * f) >= best);
    }
  }
  // At the extremizer the optimal dilation is the identity.
  const EntropyParams lo{0.7, 2.0}, hi{2.5, 3.0};
  CHECK_THAT(optimal_dilation(lo, 3.0, S, phi1_moment(lo, 3.0)), WithinRel(1.0, 1e-13));
  CHECK_THAT(optimal_dilation(hi, 3.0, S, phi2_moment(hi, 3.0),
                              std::pow(phi2_alpha_norm(hi, 3.0, S), 1.0 / hi.alpha)),
             WithinRel(1.0, 1e-13));
}
