#pragma once

// Homogeneous groups on R^N: dilation weights, the homogeneous dimension,
// quasi-norms and the surface measure of the unit quasi-sphere.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace anisoent {

using Point = Eigen::VectorXd;

// Positive rational with normalized sign and lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Parses "3", "3/2" or a decimal with an exact small-denominator form.
Rational parse_rational(const std::string& text);
Rational rational_from_double(double value);

// Sum of the weights.
Rational homogeneous_dimension(std::span<const Rational> weights);

class GroupSpec {
 public:
  explicit GroupSpec(std::vector<Rational> weights);

  static GroupSpec euclidean(int n);
  // H^n with coordinates (x_1..x_n, y_1..y_n, t) and weights (1,...,1,2).
  static GroupSpec heisenberg(int n);

  const std::vector<Rational>& weights() const { return weights_; }
  int dimension() const { return static_cast<int>(weights_.size()); }
  Rational homogeneous_dimension() const { return q_; }
  double Q() const { return q_.to_double(); }

  bool all_unit_weights() const;
  // Weight pattern (1,...,1,2) with an even number of unit weights.
  bool heisenberg_pattern() const;
  std::string id() const;

 private:
  std::vector<Rational> weights_;
  Rational q_;
};

// D_lambda: coordinate i scales by lambda^{v_i}.
Point dilate(const Point& x, double lambda, const GroupSpec& group);

// Axis-aligned box, used for the Haar scaling identity and Monte Carlo.
struct Box {
  Point lower;
  Point upper;
  double volume() const;
};
Box dilate(const Box& box, double lambda, const GroupSpec& group);

enum class NormKind { euclidean, koranyi, weighted_power, custom };

std::string to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& text);

struct SphereMeasure {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct QuasiNormSpec {
  NormKind kind = NormKind::euclidean;
  // 2 nu for weighted_power; 0 selects nu = lcm(weights).
  double exponent = 0.0;
  // custom kind only.
  std::function<double(const Point&)> evaluator;
  // Half-width of a cube containing the unit quasi-ball; 0 means undeclared.
  double bounding_radius = 0.0;
  std::string name;
  // Unset until computed by sphere_measure() or supplied as an override.
  std::optional<SphereMeasure> sphere;

  static QuasiNormSpec euclidean() { return {}; }
  static QuasiNormSpec koranyi();
  static QuasiNormSpec weighted_power(double exponent = 0.0);
  static QuasiNormSpec custom(std::function<double(const Point&)> f,
                              double bounding_radius, std::string name);

  std::string id() const;
};

// Throws std::invalid_argument when the norm kind does not fit the weights.
void check_compatible(const QuasiNormSpec& norm, const GroupSpec& group);

// Exponent 2 nu actually used by a weighted_power norm on this group.
double weighted_power_exponent(const QuasiNormSpec& norm, const GroupSpec& group);

double quasi_norm(const Point& x, const QuasiNormSpec& norm, const GroupSpec& group);

// Half-widths of a box enclosing the unit quasi-ball.
Point unit_ball_half_widths(const QuasiNormSpec& norm, const GroupSpec& group);

// |S| = Q * vol(unit quasi-ball). Exact for the euclidean kind, Monte Carlo
// over the enclosing box otherwise.
SphereMeasure sphere_measure(const GroupSpec& group, const QuasiNormSpec& norm,
                             std::uint64_t samples, std::uint64_t seed);
// Always the Monte Carlo estimate, also for the euclidean kind.
SphereMeasure sphere_measure_monte_carlo(const GroupSpec& group, const QuasiNormSpec& norm,
                                         std::uint64_t samples, std::uint64_t seed);

// Returns a copy of `norm` carrying its sphere measure, estimating it if the
// norm does not have one yet.
QuasiNormSpec with_sphere_measure(QuasiNormSpec norm, const GroupSpec& group,
                                  std::uint64_t samples = 1'000'000,
                                  std::uint64_t seed = 12345);

// Mean of a degree-0 homogeneous function over the unit quasi-sphere, taken
// as its mean over uniform points of the unit quasi-ball.
struct SphereAverage {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t accepted = 0;
};
SphereAverage sphere_average(const std::function<double(const Point&)>& h,
                             const GroupSpec& group, const QuasiNormSpec& norm,
                             std::uint64_t samples, std::uint64_t seed);

// Left-invariant first-layer frames.
//   euclidean:  the coordinate partials.
//   heisenberg: X_i = d/dx_i - (y_i/2) d/dt, Y_i = d/dy_i + (x_i/2) d/dt.
enum class HorizontalFrame { euclidean, heisenberg };

std::string to_string(HorizontalFrame frame);
HorizontalFrame default_frame(const GroupSpec& group);

// Applies the frame to a full coordinate gradient.
Point horizontal_from_full(const Point& x, const Point& full_gradient,
                           HorizontalFrame frame);

// Central finite-difference gradient with step eps^{1/3} (1 + |x|).
Point finite_difference_gradient(const std::function<double(const Point&)>& f,
                                 const Point& x);

// Horizontal gradient of the quasi-norm itself. Analytic for (euclidean norm,
// euclidean frame) and (koranyi norm, heisenberg frame), finite differences
// otherwise.
Point horizontal_norm_gradient(const Point& x, const QuasiNormSpec& norm,
                               const GroupSpec& group, HorizontalFrame frame);

}  // namespace anisoent
