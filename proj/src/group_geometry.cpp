#include "anisoent/group_geometry.hpp"

#include "anisoent/sampling.hpp"
#include "anisoent/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace anisoent {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::string Rational::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t l = std::lcm(a.den, b.den);
  return Rational(a.num * (l / a.den) + b.num * (l / b.den), l);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("weight must be finite");
  // Continued-fraction convergents, denominators up to 10^6.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = value;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > 1'000'000) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::abs(approx - value) <= 1e-12 * std::max(1.0, std::abs(value))) {
      return Rational(h1, k1);
    }
    const double frac = x - a;
    if (frac == 0.0) break;
    x = 1.0 / frac;
  }
  throw std::invalid_argument("weight " + std::to_string(value) +
                              " has no exact rational form with denominator <= 1e6");
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return rational_from_double(v);
    }
    std::size_t used_num = 0, used_den = 0;
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    const long long n = std::stoll(num, &used_num);
    const long long d = std::stoll(den, &used_den);
    if (used_num != num.size() || used_den != den.size()) throw std::invalid_argument(text);
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("cannot parse rational '" + text + "'");
  }
}

Rational homogeneous_dimension(std::span<const Rational> weights) {
  if (weights.empty()) throw std::invalid_argument("weight vector is empty");
  Rational q(0);
  for (const auto& w : weights) {
    if (w.num <= 0) throw std::invalid_argument("weights must be positive, got " + w.to_string());
    q = q + w;
  }
  return q;
}

GroupSpec::GroupSpec(std::vector<Rational> weights)
    : weights_(std::move(weights)), q_(anisoent::homogeneous_dimension(weights_)) {}

GroupSpec GroupSpec::euclidean(int n) {
  if (n < 1) throw std::invalid_argument("euclidean dimension must be >= 1");
  return GroupSpec(std::vector<Rational>(static_cast<std::size_t>(n), Rational(1)));
}

GroupSpec GroupSpec::heisenberg(int n) {
  if (n < 1) throw std::invalid_argument("Heisenberg index must be >= 1");
  std::vector<Rational> w(static_cast<std::size_t>(2 * n), Rational(1));
  w.emplace_back(2);
  return GroupSpec(std::move(w));
}

bool GroupSpec::all_unit_weights() const {
  for (const auto& w : weights_) {
    if (!(w == Rational(1))) return false;
  }
  return true;
}

bool GroupSpec::heisenberg_pattern() const {
  const int n = dimension();
  if (n < 3 || n % 2 == 0) return false;
  for (int i = 0; i + 1 < n; ++i) {
    if (!(weights_[static_cast<std::size_t>(i)] == Rational(1))) return false;
  }
  return weights_.back() == Rational(2);
}

std::string GroupSpec::id() const {
  std::string s = "weights=(";
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (i) s += ",";
    s += weights_[i].to_string();
  }
  return s + ")";
}

Point dilate(const Point& x, double lambda, const GroupSpec& group) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("dilation parameter must be positive");
  }
  if (x.size() != group.dimension()) {
    throw std::invalid_argument("point dimension does not match the group");
  }
  Point y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    y[i] = std::pow(lambda, group.weights()[static_cast<std::size_t>(i)].to_double()) * x[i];
  }
  return y;
}

double Box::volume() const { return (upper - lower).prod(); }

Box dilate(const Box& box, double lambda, const GroupSpec& group) {
  return {dilate(box.lower, lambda, group), dilate(box.upper, lambda, group)};
}

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::euclidean: return "euclidean";
    case NormKind::koranyi: return "koranyi";
    case NormKind::weighted_power: return "weighted_power";
    case NormKind::custom: return "custom";
  }
  return "unknown";
}

NormKind norm_kind_from_string(const std::string& text) {
  if (text == "euclidean") return NormKind::euclidean;
  if (text == "koranyi") return NormKind::koranyi;
  if (text == "weighted_power") return NormKind::weighted_power;
  if (text == "custom") return NormKind::custom;
  throw std::invalid_argument("unknown norm kind '" + text + "'");
}

QuasiNormSpec QuasiNormSpec::koranyi() {
  QuasiNormSpec n;
  n.kind = NormKind::koranyi;
  return n;
}

QuasiNormSpec QuasiNormSpec::weighted_power(double exponent) {
  QuasiNormSpec n;
  n.kind = NormKind::weighted_power;
  n.exponent = exponent;
  return n;
}

QuasiNormSpec QuasiNormSpec::custom(std::function<double(const Point&)> f,
                                    double bounding_radius, std::string name) {
  QuasiNormSpec n;
  n.kind = NormKind::custom;
  n.evaluator = std::move(f);
  n.bounding_radius = bounding_radius;
  n.name = std::move(name);
  return n;
}

std::string QuasiNormSpec::id() const {
  switch (kind) {
    case NormKind::weighted_power:
      if (exponent > 0) {
        std::ostringstream os;
        os << "weighted_power(exponent=" << exponent << ")";
        return os.str();
      }
      return "weighted_power";
    case NormKind::custom:
      return "custom(" + name + ")";
    default:
      return to_string(kind);
  }
}

void check_compatible(const QuasiNormSpec& norm, const GroupSpec& group) {
  switch (norm.kind) {
    case NormKind::euclidean:
      if (!group.all_unit_weights()) {
        throw std::invalid_argument("euclidean norm requires all weights equal to 1, got " +
                                    group.id());
      }
      return;
    case NormKind::koranyi:
      if (!group.heisenberg_pattern()) {
        throw std::invalid_argument("koranyi norm requires weights (1,...,1,2) with 2n unit weights, got " +
                                    group.id());
      }
      return;
    case NormKind::weighted_power:
      weighted_power_exponent(norm, group);
      return;
    case NormKind::custom:
      if (!norm.evaluator) throw std::invalid_argument("custom norm has no evaluator");
      return;
  }
}

double weighted_power_exponent(const QuasiNormSpec& norm, const GroupSpec& group) {
  if (norm.exponent > 0.0) {
    for (const auto& w : group.weights()) {
      const double ratio = norm.exponent / (2.0 * w.to_double());
      if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1.0) {
        throw std::invalid_argument("weighted_power exponent " + std::to_string(norm.exponent) +
                                    " is not twice a common multiple of the weights");
      }
    }
    return norm.exponent;
  }
  // lcm of p_i/q_i is lcm(p_i)/gcd(q_i).
  std::int64_t l = 1, g = 0;
  for (const auto& w : group.weights()) {
    l = std::lcm(l, w.num);
    g = std::gcd(g, w.den);
  }
  return 2.0 * static_cast<double>(l) / static_cast<double>(g);
}

namespace {

double weighted_power_norm(const Point& x, const GroupSpec& group, double two_nu) {
  const auto& w = group.weights();
  // Factor out the largest homogeneous coordinate size to avoid overflow.
  double scale = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    scale = std::max(scale, std::pow(std::abs(x[i]), 1.0 / w[static_cast<std::size_t>(i)].to_double()));
  }
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = w[static_cast<std::size_t>(i)].to_double();
    const double scaled = std::abs(x[i]) / std::pow(scale, v);
    sum += std::pow(scaled, two_nu / v);
  }
  return scale * std::pow(sum, 1.0 / two_nu);
}

double koranyi_norm(const Point& x) {
  const Eigen::Index horizontal = x.size() - 1;
  const double z2 = x.head(horizontal).squaredNorm();
  const double t = x[horizontal];
  // (|z|^4 + 16 t^2)^{1/4}
  return std::sqrt(std::hypot(z2, 4.0 * t));
}

}  // namespace

double quasi_norm(const Point& x, const QuasiNormSpec& norm, const GroupSpec& group) {
  if (x.size() != group.dimension()) {
    throw std::invalid_argument("point dimension does not match the group");
  }
  check_compatible(norm, group);
  switch (norm.kind) {
    case NormKind::euclidean: return x.norm();
    case NormKind::koranyi: return koranyi_norm(x);
    case NormKind::weighted_power:
      return weighted_power_norm(x, group, weighted_power_exponent(norm, group));
    case NormKind::custom: return norm.evaluator(x);
  }
  return 0.0;
}

Point unit_ball_half_widths(const QuasiNormSpec& norm, const GroupSpec& group) {
  check_compatible(norm, group);
  const int n = group.dimension();
  switch (norm.kind) {
    case NormKind::euclidean:
    case NormKind::weighted_power:
      return Point::Ones(n);
    case NormKind::koranyi: {
      Point h = Point::Ones(n);
      h[n - 1] = 0.25;
      return h;
    }
    case NormKind::custom:
      if (!(norm.bounding_radius > 0.0)) {
        throw std::invalid_argument("custom norm '" + norm.name +
                                    "' has no declared bounding radius; cannot enclose its unit ball");
      }
      return Point::Constant(n, norm.bounding_radius);
  }
  return Point::Ones(n);
}

namespace {

struct BlockTally {
  std::uint64_t hits = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
};

// Uniform points in the enclosing box; calls visit(point) on those inside the
// unit ball. Blocks are tallied independently and merged in order.
template <typename Visit>
std::vector<BlockTally> sample_unit_ball(const GroupSpec& group, const QuasiNormSpec& norm,
                                         std::uint64_t samples, std::uint64_t seed,
                                         Visit visit) {
  const Point half = unit_ball_half_widths(norm, group);
  const std::uint64_t blocks = (samples + kMonteCarloBlockSize - 1) / kMonteCarloBlockSize;
  std::vector<BlockTally> tallies(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    BlockRng rng(seed, b);
    const std::uint64_t begin = b * kMonteCarloBlockSize;
    const std::uint64_t end = std::min(samples, begin + kMonteCarloBlockSize);
    Point x(half.size());
    BlockTally t;
    for (std::uint64_t i = begin; i < end; ++i) {
      for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = rng.uniform(-half[k], half[k]);
      if (quasi_norm(x, norm, group) <= 1.0) {
        ++t.hits;
        const double v = visit(x);
        t.sum += v;
        t.sum_sq += v * v;
      }
    }
    tallies[b] = t;
  });
  return tallies;
}

}  // namespace

SphereMeasure sphere_measure(const GroupSpec& group, const QuasiNormSpec& norm,
                             std::uint64_t samples, std::uint64_t seed) {
  check_compatible(norm, group);
  if (norm.kind == NormKind::euclidean) {
    const double n = group.dimension();
    const double log_s = std::log(2.0) + 0.5 * n * std::log(std::numbers::pi) - log_gamma(0.5 * n);
    return {std::exp(log_s), 0.0, true, 0, seed};
  }
  return sphere_measure_monte_carlo(group, norm, samples, seed);
}

SphereMeasure sphere_measure_monte_carlo(const GroupSpec& group, const QuasiNormSpec& norm,
                                         std::uint64_t samples, std::uint64_t seed) {
  check_compatible(norm, group);
  if (samples < 10'000) {
    throw std::invalid_argument("sphere_measure needs at least 1e4 samples");
  }
  const Point half = unit_ball_half_widths(norm, group);
  const double box_volume = (2.0 * half).prod();
  const auto tallies = sample_unit_ball(group, norm, samples, seed, [](const Point&) { return 0.0; });
  std::uint64_t hits = 0;
  for (const auto& t : tallies) hits += t.hits;
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / n;
  const double q = group.Q();
  return {q * box_volume * p, q * box_volume * std::sqrt(p * (1.0 - p) / n), false, samples, seed};
}

QuasiNormSpec with_sphere_measure(QuasiNormSpec norm, const GroupSpec& group,
                                  std::uint64_t samples, std::uint64_t seed) {
  if (!norm.sphere) norm.sphere = sphere_measure(group, norm, samples, seed);
  return norm;
}

SphereAverage sphere_average(const std::function<double(const Point&)>& h,
                             const GroupSpec& group, const QuasiNormSpec& norm,
                             std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1'000) throw std::invalid_argument("sphere_average needs at least 1e3 samples");
  const auto tallies = sample_unit_ball(group, norm, samples, seed, h);
  BlockTally total;
  for (const auto& t : tallies) {
    total.hits += t.hits;
    total.sum += t.sum;
    total.sum_sq += t.sum_sq;
  }
  if (total.hits < 2) throw std::runtime_error("sphere_average: too few points in the unit ball");
  const double m = static_cast<double>(total.hits);
  const double mean = total.sum / m;
  const double var = std::max(0.0, (total.sum_sq / m - mean * mean) * m / (m - 1.0));
  return {mean, std::sqrt(var / m), total.hits};
}

std::string to_string(HorizontalFrame frame) {
  return frame == HorizontalFrame::euclidean ? "euclidean" : "heisenberg";
}

HorizontalFrame default_frame(const GroupSpec& group) {
  if (group.all_unit_weights()) return HorizontalFrame::euclidean;
  if (group.heisenberg_pattern()) return HorizontalFrame::heisenberg;
  throw std::invalid_argument("no horizontal frame is known for " + group.id());
}

Point horizontal_from_full(const Point& x, const Point& g, HorizontalFrame frame) {
  if (frame == HorizontalFrame::euclidean) return g;
  const Eigen::Index n = (x.size() - 1) / 2;
  const double dt = g[2 * n];
  Point h(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h[i] = g[i] - 0.5 * x[n + i] * dt;
    h[n + i] = g[n + i] + 0.5 * x[i] * dt;
  }
  return h;
}

Point finite_difference_gradient(const std::function<double(const Point&)>& f, const Point& x) {
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
  Point g(x.size());
  Point xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

Point horizontal_norm_gradient(const Point& x, const QuasiNormSpec& norm,
                               const GroupSpec& group, HorizontalFrame frame) {
  if (frame == HorizontalFrame::heisenberg && !group.heisenberg_pattern()) {
    throw std::invalid_argument("heisenberg frame needs weights (1,...,1,2)");
  }
  if (frame == HorizontalFrame::euclidean && !group.all_unit_weights()) {
    throw std::invalid_argument("euclidean frame needs unit weights");
  }
  if (norm.kind == NormKind::euclidean && frame == HorizontalFrame::euclidean) {
    const double r = x.norm();
    return r > 0.0 ? Point(x / r) : Point(Point::Zero(x.size()));
  }
  if (norm.kind == NormKind::koranyi && frame == HorizontalFrame::heisenberg) {
    const Eigen::Index n = (x.size() - 1) / 2;
    const double z2 = x.head(2 * n).squaredNorm();
    const double t = x[2 * n];
    const double rho = std::sqrt(std::hypot(z2, 4.0 * t));
    Point h = Point::Zero(2 * n);
    if (rho == 0.0) return h;
    const double rho3 = rho * rho * rho;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double xi = x[i], yi = x[n + i];
      h[i] = (z2 * xi - 4.0 * yi * t) / rho3;
      h[n + i] = (z2 * yi + 4.0 * xi * t) / rho3;
    }
    return h;
  }
  const auto f = [&](const Point& p) { return quasi_norm(p, norm, group); };
  return horizontal_from_full(x, finite_difference_gradient(f, x), frame);
}

}  // namespace anisoent
