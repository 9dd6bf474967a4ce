#pragma once

// JSON group/norm and density specifications, and number formatting shared by
// the report writers.

#include "anisoent/densities.hpp"
#include "anisoent/group_geometry.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace anisoent::io {

// Malformed specification. The message starts with the JSON path of the
// offending field, e.g. "density.components[1].weight: must be positive".
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GroupNorm {
  GroupSpec group;
  QuasiNormSpec norm;  // always carries a sphere measure
};

nlohmann::json read_json_file(const std::string& path);

// {"weights": [...], "norm": {"kind": ..., "exponent"?: ...}, "sphere_measure"?: number}
// Weights may be integers, decimals or "p/q" strings. A missing norm means
// euclidean for unit weights and koranyi for the (1,...,1,2) pattern.
GroupNorm parse_group(const nlohmann::json& j, std::uint64_t samples, std::uint64_t seed,
                      const std::string& path = "group");

// Builds a group from its parts; norm_kind empty picks the default as above.
// A given sphere measure is used as is instead of being computed.
GroupNorm make_group(const std::vector<Rational>& weights, const std::string& norm_kind,
                     double exponent, std::uint64_t samples, std::uint64_t seed,
                     const std::string& path = "group",
                     std::optional<double> sphere = std::nullopt);

// {"kind": "phi1"|"phi2", "alpha", "b"} | {"kind": "gaussian", "sigma"}
// | {"kind": "uniform_ball", "radius"} | {"kind": "dilated", "lambda", "inner"}
// | {"kind": "mixture", "components": [{"weight", "density"}, ...]}
DensitySpec parse_density(const nlohmann::json& j, const GroupNorm& gn,
                          const std::string& path = "density");

// Shortest round-trip decimal, "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double v);

nlohmann::ordered_json sphere_json(const SphereMeasure& s);

}  // namespace anisoent::io
