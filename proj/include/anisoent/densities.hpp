#pragma once

// Probability densities on a homogeneous group. Every supported kind is a
// function of the quasi-norm alone, u(x) = g(|x|), so integrals reduce to the
// radial profile g.

#include "anisoent/group_geometry.hpp"
#include "anisoent/quadrature.hpp"
#include "anisoent/sharp_constants.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace anisoent {

enum class DensityKind { phi1, phi2, gaussian, uniform_ball, dilated, mixture };

std::string to_string(DensityKind kind);

class DensitySpec {
 public:
  struct Node;

  DensityKind kind() const;
  const GroupSpec& group() const { return *group_; }
  const QuasiNormSpec& norm() const { return *norm_; }
  double Q() const { return group_->Q(); }
  double sphere_measure() const { return norm_->sphere->value; }

  bool radial() const { return true; }
  bool gradient_available() const;

  // Radial profile g and its derivative g'.
  double profile(double r) const;
  double profile_derivative(double r) const;
  // ln g and (ln g)', accurate far into the tails where g underflows.
  double log_profile(double r) const;
  double log_profile_slope(double r) const;

  double operator()(const Point& x) const;
  // g'(|x|) times the horizontal gradient of the quasi-norm.
  Point horizontal_gradient(const Point& x, HorizontalFrame frame) const;

  // Domain information for integrate_radial.
  RadialDomain radial_domain() const;

  // Mass minus one, from quadrature at construction.
  double normalization_residual() const { return residual_; }

  // Extremizer parameters when kind() is phi1 or phi2.
  std::optional<EntropyParams> extremizer_params() const;

  nlohmann::ordered_json to_json() const;

 private:
  friend DensitySpec make_density(std::shared_ptr<const Node>, std::shared_ptr<const GroupSpec>,
                                  std::shared_ptr<const QuasiNormSpec>);
  friend DensitySpec dilate_density(const DensitySpec&, double);
  friend DensitySpec make_mixture(const std::vector<std::pair<double, DensitySpec>>&);
  DensitySpec() = default;

  std::shared_ptr<const Node> node_;
  std::shared_ptr<const GroupSpec> group_;
  std::shared_ptr<const QuasiNormSpec> norm_;
  double residual_ = 0.0;
};

// Tolerance of the construction-time normalization check.
inline constexpr double kNormalizationTolerance = 1e-7;

// The norm must carry a sphere measure (see with_sphere_measure).
DensitySpec make_phi1(const EntropyParams& params, const GroupSpec& group, const QuasiNormSpec& norm);
DensitySpec make_phi2(const EntropyParams& params, const GroupSpec& group, const QuasiNormSpec& norm);
// Extremizer of the branch selected by params.alpha.
DensitySpec make_extremizer(const EntropyParams& params, const GroupSpec& group,
                            const QuasiNormSpec& norm);
// (2 pi sigma^2)^{-n/2} exp(-|x|^2 / (2 sigma^2)) on euclidean R^n.
DensitySpec make_gaussian(double sigma, int n);
DensitySpec make_gaussian(double sigma, const GroupSpec& group, const QuasiNormSpec& norm);
DensitySpec make_uniform_ball(double radius, const GroupSpec& group, const QuasiNormSpec& norm);
// lambda^Q u(D_lambda x).
DensitySpec dilate_density(const DensitySpec& u, double lambda);
// Weights must be positive and sum to 1; all parts share one group and norm.
DensitySpec make_mixture(const std::vector<std::pair<double, DensitySpec>>& parts);

}  // namespace anisoent
