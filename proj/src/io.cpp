#include "anisoent/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace anisoent::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SpecError(path + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double positive(const json& j, const std::string& key, const std::string& path) {
  const double v = number(j, key, path);
  if (!(v > 0.0) || !std::isfinite(v)) fail(path + "." + key, "must be positive and finite");
  return v;
}

Rational weight_value(const json& v, const std::string& path) {
  try {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number()) return rational_from_double(v.get<double>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path, "expected a number or \"p/q\" string");
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError(path + ": " + e.what());
  }
}

GroupNorm make_group(const std::vector<Rational>& weights, const std::string& norm_kind,
                     double exponent, std::uint64_t samples, std::uint64_t seed,
                     const std::string& path, std::optional<double> sphere) {
  GroupSpec group = [&] {
    try {
      return GroupSpec(weights);
    } catch (const std::exception& e) {
      fail(path + ".weights", e.what());
    }
  }();
  QuasiNormSpec norm;
  std::string kind = norm_kind;
  if (kind.empty()) {
    if (group.all_unit_weights()) kind = "euclidean";
    else if (group.heisenberg_pattern()) kind = "koranyi";
    else kind = "weighted_power";
  }
  try {
    switch (norm_kind_from_string(kind)) {
      case NormKind::euclidean: norm = QuasiNormSpec::euclidean(); break;
      case NormKind::koranyi: norm = QuasiNormSpec::koranyi(); break;
      case NormKind::weighted_power: norm = QuasiNormSpec::weighted_power(exponent); break;
      case NormKind::custom:
        fail(path + ".norm.kind", "custom norms need an evaluator and are only available from the library");
    }
    check_compatible(norm, group);
    if (norm.kind == NormKind::weighted_power) weighted_power_exponent(norm, group);
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path + ".norm", e.what());
  }
  if (sphere) {
    norm.sphere = SphereMeasure{*sphere, 0.0, true, 0, 0};
    return {group, norm};
  }
  return {group, with_sphere_measure(norm, group, samples, seed)};
}

GroupNorm parse_group(const json& j, std::uint64_t samples, std::uint64_t seed,
                      const std::string& path) {
  const json& w = field(j, "weights", path);
  if (!w.is_array() || w.empty()) fail(path + ".weights", "expected a non-empty array");
  std::vector<Rational> weights;
  for (std::size_t i = 0; i < w.size(); ++i) {
    weights.push_back(weight_value(w[i], path + ".weights[" + std::to_string(i) + "]"));
  }
  std::string kind;
  double exponent = 0.0;
  if (auto it = j.find("norm"); it != j.end()) {
    const std::string np = path + ".norm";
    const json& k = field(*it, "kind", np);
    if (!k.is_string()) fail(np + ".kind", "expected a string");
    kind = k.get<std::string>();
    if (it->contains("exponent")) exponent = positive(*it, "exponent", np);
  }
  std::optional<double> sphere;
  if (j.contains("sphere_measure")) sphere = positive(j, "sphere_measure", path);
  return make_group(weights, kind, exponent, samples, seed, path, sphere);
}

DensitySpec parse_density(const json& j, const GroupNorm& gn, const std::string& path) {
  const json& k = field(j, "kind", path);
  if (!k.is_string()) fail(path + ".kind", "expected a string");
  const std::string kind = k.get<std::string>();
  try {
    if (kind == "phi1" || kind == "phi2") {
      EntropyParams p{number(j, "alpha", path), number(j, "b", path)};
      if ((kind == "phi1") != (p.alpha < 1.0)) {
        fail(path + ".alpha", kind == "phi1" ? "phi1 needs alpha < 1" : "phi2 needs alpha > 1");
      }
      return kind == "phi1" ? make_phi1(p, gn.group, gn.norm) : make_phi2(p, gn.group, gn.norm);
    }
    if (kind == "gaussian") return make_gaussian(positive(j, "sigma", path), gn.group, gn.norm);
    if (kind == "uniform_ball") return make_uniform_ball(positive(j, "radius", path), gn.group, gn.norm);
    if (kind == "dilated") {
      const double lambda = positive(j, "lambda", path);
      return dilate_density(parse_density(field(j, "inner", path), gn, path + ".inner"), lambda);
    }
    if (kind == "mixture") {
      const json& comps = field(j, "components", path);
      if (!comps.is_array() || comps.empty()) fail(path + ".components", "expected a non-empty array");
      std::vector<std::pair<double, DensitySpec>> parts;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string cp = path + ".components[" + std::to_string(i) + "]";
        parts.emplace_back(positive(comps[i], "weight", cp),
                           parse_density(field(comps[i], "density", cp), gn, cp + ".density"));
      }
      return make_mixture(parts);
    }
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "unknown density kind \"" + kind + "\"");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

nlohmann::ordered_json sphere_json(const SphereMeasure& s) {
  nlohmann::ordered_json j;
  j["value"] = s.value;
  j["std_error"] = s.std_error;
  j["exact"] = s.exact;
  j["samples"] = s.samples;
  j["seed"] = s.seed;
  return j;
}

}  // namespace anisoent::io
