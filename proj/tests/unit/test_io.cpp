#include "anisoent/io.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace anisoent;
using nlohmann::json;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

TEST_CASE("group json", "[io]") {
  const auto e = io::parse_group(json::parse(R"({"weights": [1, 1, 1]})"), 20'000, 1);
  CHECK(e.norm.kind == NormKind::euclidean);
  CHECK(e.norm.sphere->exact);
  CHECK_THAT(e.norm.sphere->value, WithinRel(4.0 * std::numbers::pi, 1e-14));

  const auto h = io::parse_group(json::parse(R"({"weights": [1, 1, 2]})"), 20'000, 1);
  CHECK(h.norm.kind == NormKind::koranyi);
  CHECK_FALSE(h.norm.sphere->exact);

  const auto w = io::parse_group(json::parse(R"({"weights": ["1/2", 1], "norm": {"kind": "weighted_power"}})"),
                                 20'000, 1);
  CHECK(w.group.homogeneous_dimension() == Rational(3, 2));

  const auto o = io::parse_group(json::parse(R"({"weights": [1, 1, 2], "sphere_measure": 5.0})"), 20'000, 1);
  CHECK(o.norm.sphere->value == 5.0);
}

TEST_CASE("group json errors name the field", "[io]") {
  CHECK_THROWS_WITH(io::parse_group(json::parse(R"({"weight": [1]})"), 20'000, 1),
                    ContainsSubstring("group.weights: missing field"));
  CHECK_THROWS_WITH(io::parse_group(json::parse(R"({"weights": [1, "x"]})"), 20'000, 1),
                    ContainsSubstring("group.weights[1]"));
  CHECK_THROWS_WITH(io::parse_group(json::parse(R"({"weights": [1, 2], "norm": {"kind": "euclidean"}})"), 20'000, 1),
                    ContainsSubstring("group.norm"));
  CHECK_THROWS_WITH(io::parse_group(json::parse(R"({"weights": [1, 1], "norm": {"kind": "custom"}})"), 20'000, 1),
                    ContainsSubstring("group.norm.kind"));
  CHECK_THROWS_WITH(io::parse_group(json::parse(R"({"weights": [1], "sphere_measure": -2})"), 20'000, 1),
                    ContainsSubstring("group.sphere_measure"));
}

TEST_CASE("density json round trip", "[io]") {
  const auto gn = io::parse_group(json::parse(R"({"weights": [1, 1, 2]})"), 20'000, 1);
  const json spec = json::parse(R"({
    "kind": "mixture",
    "components": [
      {"weight": 0.25, "density": {"kind": "phi1", "alpha": 0.8, "b": 2}},
      {"weight": 0.75, "density": {"kind": "dilated", "lambda": 0.5,
                                   "inner": {"kind": "uniform_ball", "radius": 2}}}
    ]})");
  const auto u = io::parse_density(spec, gn);
  CHECK(u.kind() == DensityKind::mixture);
  const auto again = io::parse_density(json::parse(u.to_json().dump()), gn);
  for (double r : {0.0, 0.3, 1.0, 3.9, 4.1}) CHECK(again.profile(r) == u.profile(r));
}

TEST_CASE("density json errors name the field", "[io]") {
  const auto gn = io::parse_group(json::parse(R"({"weights": [1, 1]})"), 20'000, 1);
  CHECK_THROWS_WITH(io::parse_density(json::parse(R"({"kind": "blob"})"), gn),
                    ContainsSubstring("density.kind"));
  CHECK_THROWS_WITH(io::parse_density(json::parse(R"({"kind": "gaussian"})"), gn),
                    ContainsSubstring("density.sigma: missing field"));
  CHECK_THROWS_WITH(io::parse_density(json::parse(R"({"kind": "phi1", "alpha": 2, "b": 2})"), gn),
                    ContainsSubstring("density.alpha"));
  CHECK_THROWS_WITH(
      io::parse_density(json::parse(R"({"kind": "mixture", "components": [{"weight": 1, "density": {"kind": "dilated", "lambda": -1, "inner": {"kind": "gaussian", "sigma": 1}}}]})"), gn),
      ContainsSubstring("density.components[0].density.lambda"));
  CHECK_THROWS_AS(io::parse_density(json::parse(R"({"kind": "phi1", "alpha": 0.5, "b": 1})"),
                                    io::parse_group(json::parse(R"({"weights": [1, 1]})"), 20'000, 1)),
                  io::SpecError);
}

TEST_CASE("number formatting round trips", "[io]") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(125.0 / 9.0) == "13.88888888888889");
  CHECK(io::format_double(2.0) == "2");
  CHECK(io::format_double(NAN) == "nan");
  CHECK(io::format_double(-INFINITY) == "-inf");
  const double x = 0.1234567890123456789;
  CHECK(std::stod(io::format_double(x)) == x);
}
