#include "anisoent/densities.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace anisoent;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const GroupSpec& h1() {
  static const GroupSpec g = GroupSpec::heisenberg(1);
  return g;
}

const QuasiNormSpec& koranyi() {
  static const QuasiNormSpec k = with_sphere_measure(QuasiNormSpec::koranyi(), h1(), 200'000, 1);
  return k;
}

}  // namespace

TEST_CASE("constructed densities are normalized", "[densities]") {
  const auto e3 = GroupSpec::euclidean(3);
  const auto eu = QuasiNormSpec::euclidean();
  std::vector<DensitySpec> all = {
      make_phi1({0.8, 2.0}, e3, eu),       make_phi2({2.0, 2.0}, e3, eu),
      make_gaussian(0.7, 3),               make_uniform_ball(1.5, e3, eu),
      make_phi1({0.9, 1.0}, h1(), koranyi()), make_phi2({3.0, 4.0}, h1(), koranyi()),
      make_uniform_ball(0.5, h1(), koranyi())};
  all.push_back(dilate_density(all[0], 2.5));
  all.push_back(make_mixture({{0.25, all[1]}, {0.75, all[2]}}));
  for (const auto& u : all) CHECK(std::abs(u.normalization_residual()) < 1e-9);
}

TEST_CASE("closed-form profiles", "[densities]") {
  const auto g = make_gaussian(2.0, 2);
  CHECK_THAT(g.profile(0.0), WithinRel(1.0 / (8.0 * std::numbers::pi), 1e-14));
  CHECK_THAT(g.profile(1.0), WithinRel(std::exp(-0.125) / (8.0 * std::numbers::pi), 1e-14));
  CHECK_THAT(g.profile_derivative(1.0), WithinRel(-0.25 * g.profile(1.0), 1e-14));
  const auto e1 = GroupSpec::euclidean(1);
  const auto u = make_uniform_ball(1.0, e1, QuasiNormSpec::euclidean());
  CHECK_THAT(u.profile(0.5), WithinRel(0.5, 1e-14));
  CHECK(u.profile(1.5) == 0.0);
  CHECK_FALSE(u.gradient_available());
  const auto p2 = make_phi2({2.0, 2.0}, e1, QuasiNormSpec::euclidean());
  // C2 = 3/4 for alpha = 2, b = 2 on R^1.
  CHECK_THAT(p2.profile(0.5), WithinRel(0.75 * 0.75, 1e-14));
  CHECK(p2.profile(1.0) == 0.0);
  CHECK(p2.radial_domain().support == 1.0);
}

TEST_CASE("dilation scales the profile", "[densities]") {
  const auto base = make_phi1({0.7, 2.0}, h1(), koranyi());
  const auto d = dilate_density(base, 3.0);
  for (double r : {0.0, 0.1, 0.7, 2.0, 9.0}) {
    CHECK_THAT(d.profile(r), WithinRel(std::pow(3.0, 4.0) * base.profile(3.0 * r), 1e-14));
    CHECK_THAT(d.profile_derivative(r), WithinRel(std::pow(3.0, 5.0) * base.profile_derivative(3.0 * r), 1e-14));
  }
  const auto p2 = dilate_density(make_phi2({2.0, 2.0}, h1(), koranyi()), 2.0);
  CHECK(p2.radial_domain().support == 0.5);
}

TEST_CASE("point evaluation and horizontal gradient", "[densities]") {
  const auto u = make_phi1({0.8, 2.0}, h1(), koranyi());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  for (int i = 0; i < 50; ++i) {
    const Point x{{d(rng), d(rng), d(rng)}};
    CHECK_THAT(u(x), WithinRel(u.profile(quasi_norm(x, koranyi(), h1())), 1e-15));
    const Point fd = horizontal_from_full(x, finite_difference_gradient(u, x), HorizontalFrame::heisenberg);
    const Point an = u.horizontal_gradient(x, HorizontalFrame::heisenberg);
    CHECK((an - fd).norm() < 1e-6 * std::max(1e-3, an.norm()));
  }
}

TEST_CASE("invalid densities are rejected", "[densities]") {
  const auto eu = QuasiNormSpec::euclidean();
  const auto e2 = GroupSpec::euclidean(2);
  CHECK_THROWS_AS(make_gaussian(1.0, h1(), koranyi()), std::invalid_argument);
  CHECK_THROWS_AS(make_gaussian(-1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_phi1({2.0, 2.0}, e2, eu), InvalidParameters);
  CHECK_THROWS_AS(make_phi1({0.5, 1.0}, e2, eu), InvalidParameters);
  CHECK_THROWS_AS(make_phi1({0.9, 2.0}, h1(), QuasiNormSpec::koranyi()), std::invalid_argument);
  const auto a = make_gaussian(1.0, 2);
  const auto b = make_gaussian(2.0, 2);
  CHECK_THROWS_AS(make_mixture({{0.5, a}, {0.6, b}}), std::invalid_argument);
  CHECK_THROWS_AS(make_mixture({{1.5, a}, {-0.5, b}}), std::invalid_argument);
  CHECK_THROWS_AS(make_mixture({{0.5, a}, {0.5, make_gaussian(1.0, 3)}}), std::invalid_argument);
  CHECK_THROWS_AS(dilate_density(a, 0.0), std::invalid_argument);
}

TEST_CASE("json description", "[densities]") {
  const auto a = make_phi2({2.0, 3.0}, GroupSpec::euclidean(1), QuasiNormSpec::euclidean());
  const auto m = make_mixture({{0.5, dilate_density(a, 2.0)}, {0.5, a}});
  const auto j = m.to_json();
  CHECK(j["kind"] == "mixture");
  CHECK(j["components"][0]["density"]["kind"] == "dilated");
  CHECK(j["components"][0]["density"]["lambda"] == 2.0);
  CHECK(j["components"][1]["density"]["b"] == 3.0);
  CHECK(a.extremizer_params()->alpha == 2.0);
  CHECK_FALSE(m.extremizer_params());
}
