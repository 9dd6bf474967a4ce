#pragma once

// Adaptive Gauss-Kronrod quadrature for radial integrals and seeded Monte
// Carlo for integrals over R^N.

#include "anisoent/group_geometry.hpp"
#include "anisoent/sampling.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace anisoent {

struct IntegralEstimate {
  double value = 0.0;
  double abs_error = 0.0;
  std::int64_t evaluations = 0;
  bool converged = true;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_intervals = 4000;
  // Throw IntegrationError when the tolerance is not met.
  bool throw_on_failure = true;
};

// Defaults with any override from the ANISOENT_QUAD_TOL environment variable
// (sets rel_tol; abs_tol becomes rel_tol / 10).
QuadratureOptions default_quadrature_options();

using Integrand = std::function<double(double)>;

// Adaptive G7-K15 on [a, b]; breakpoints inside (a, b) start as panel edges.
IntegralEstimate integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& options = default_quadrature_options(),
                           std::vector<double> breakpoints = {});

// Integral over [a, inf): plain on [a, a + scale], then through
// r = a + scale e^v, v = s / (1 - s).
IntegralEstimate integrate_to_infinity(const Integrand& f, double a, double scale = 1.0,
                                       const QuadratureOptions& options = default_quadrature_options(),
                                       std::vector<double> breakpoints = {});

struct RadialDomain {
  // Profile vanishes beyond this radius.
  double support = std::numeric_limits<double>::infinity();
  // Radii where the profile is not smooth.
  std::vector<double> kinks;
  // Typical length scale, used by the semi-infinite map.
  double scale = 1.0;
};

// |S| * int_0^inf h(r) dr, with h already carrying the r^{Q-1} factor.
IntegralEstimate integrate_polar(const Integrand& h, double sphere, const RadialDomain& domain = {},
                                 const QuadratureOptions& options = default_quadrature_options());

// |S| * int_0^inf g(r) r^{Q-1} dr.
IntegralEstimate integrate_radial(const Integrand& profile, double Q, double sphere,
                                  const RadialDomain& domain = {},
                                  const QuadratureOptions& options = default_quadrature_options());

// Point source with a known density, for importance sampling.
class PointSampler {
 public:
  virtual ~PointSampler() = default;
  virtual int dimension() const = 0;
  virtual Point sample(BlockRng& rng) const = 0;
  virtual double density(const Point& x) const = 0;
};

class BoxSampler final : public PointSampler {
 public:
  BoxSampler(Point lower, Point upper);
  int dimension() const override { return static_cast<int>(lower_.size()); }
  Point sample(BlockRng& rng) const override;
  double density(const Point& x) const override;
  double volume() const { return volume_; }

 private:
  Point lower_, upper_;
  double volume_;
};

// Isotropic N(0, sigma^2 I) on R^n, optionally with per-coordinate scales.
class GaussianSampler final : public PointSampler {
 public:
  GaussianSampler(int dimension, double sigma);
  explicit GaussianSampler(Point sigmas);
  int dimension() const override { return static_cast<int>(sigmas_.size()); }
  Point sample(BlockRng& rng) const override;
  double density(const Point& x) const override;

 private:
  Point sigmas_;
};

// Importance-sampled int f over R^N with standard error as abs_error.
IntegralEstimate integrate_mc(const std::function<double(const Point&)>& f,
                              const PointSampler& sampler, std::uint64_t n, std::uint64_t seed);

}  // namespace anisoent
