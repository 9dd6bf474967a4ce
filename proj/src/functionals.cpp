#include "anisoent/functionals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace anisoent {

namespace {

// Integrand pieces are assembled in log space: exp(ln g + k ln r).
double log_power(double r, double k) { return k == 0.0 ? 0.0 : k * std::log(r); }

IntegralEstimate polar(const DensitySpec& u, const Integrand& h, const QuadratureOptions& options) {
  return integrate_polar(h, u.sphere_measure(), u.radial_domain(), options);
}

InequalityReport base_report(InequalityKind kind, const DensitySpec& u) {
  InequalityReport r;
  r.inequality = kind;
  r.group_id = u.group().id();
  r.norm_id = u.norm().id();
  return r;
}

void add_sphere_details(InequalityReport& r, const DensitySpec& u) {
  r.details.emplace_back("sphere_measure", u.sphere_measure());
  r.details.emplace_back("sphere_measure_std_error", u.norm().sphere->std_error);
}

}  // namespace

std::string to_string(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::renyi: return "renyi";
    case InequalityKind::shannon: return "shannon";
    case InequalityKind::log_sobolev: return "log_sobolev";
    case InequalityKind::uncertainty: return "uncertainty";
    case InequalityKind::stam_euclidean: return "stam_euclidean";
  }
  return "unknown";
}

FunctionalEstimate renyi_entropy(const DensitySpec& u, double alpha, const QuadratureOptions& options) {
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha)) {
    throw std::invalid_argument("renyi_entropy needs alpha > 0, alpha != 1");
  }
  const double k = u.Q() - 1.0;
  const auto power = polar(u, [&](double r) {
    const double l = u.log_profile(r);
    return l == -INFINITY ? 0.0 : std::exp(alpha * l + log_power(r, k));
  }, options);
  if (!(power.value > 0.0)) throw IntegrationError("int u^alpha is not positive");
  return {std::log(power.value) / (1.0 - alpha),
          power.abs_error / (power.value * std::abs(1.0 - alpha))};
}

FunctionalEstimate shannon_entropy(const DensitySpec& u, const QuadratureOptions& options) {
  const double k = u.Q() - 1.0;
  const auto e = polar(u, [&](double r) {
    const double l = u.log_profile(r);
    return l == -INFINITY ? 0.0 : -l * std::exp(l + log_power(r, k));
  }, options);
  return {e.value, e.abs_error};
}

FunctionalEstimate moment(const DensitySpec& u, double b, const QuadratureOptions& options) {
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("moment order must be positive");
  const double k = u.Q() - 1.0 + b;
  const auto m = polar(u, [&](double r) {
    const double l = u.log_profile(r);
    return l == -INFINITY ? 0.0 : std::exp(l + log_power(r, k));
  }, options);
  return {m.value, m.abs_error};
}

FisherEstimate horizontal_fisher(const DensitySpec& u, const FisherOptions& options) {
  if (!u.gradient_available()) {
    throw std::invalid_argument(to_string(u.kind()) + " density has no gradient; Fisher information undefined");
  }
  const HorizontalFrame frame = options.frame.value_or(default_frame(u.group()));
  FisherEstimate out;
  if (!(u.norm().kind == NormKind::euclidean && frame == HorizontalFrame::euclidean)) {
    const auto avg = sphere_average(
        [&](const Point& x) {
          return horizontal_norm_gradient(x, u.norm(), u.group(), frame).squaredNorm();
        },
        u.group(), u.norm(), options.samples, options.seed);
    out.sphere_factor = avg.mean;
    out.sphere_factor_error = avg.std_error;
  }

  // g'^2 / g = g (ln g)'^2
  const double k = u.Q() - 1.0;
  const Integrand integrand = [&](double r) {
    const double l = u.log_profile(r);
    if (l == -INFINITY) return 0.0;
    const double s = u.log_profile_slope(r);
    return s * s * std::exp(l + log_power(r, k));
  };
  QuadratureOptions coarse = options.quadrature;
  coarse.throw_on_failure = false;
  const auto first = polar(u, integrand, coarse);
  QuadratureOptions fine = coarse;
  fine.abs_tol /= 100.0;
  fine.rel_tol /= 100.0;
  fine.max_intervals *= 4;
  const auto second = polar(u, integrand, fine);
  const bool drifted = std::abs(second.value - first.value) > 0.01 * std::abs(first.value);

  out.value = out.sphere_factor * second.value;
  out.quad_error = out.sphere_factor * second.abs_error + second.value * out.sphere_factor_error;
  out.possibly_divergent = !first.converged || !second.converged || drifted ||
                           !std::isfinite(out.value);
  return out;
}

InequalityReport renyi_gap(const DensitySpec& u, const EntropyParams& params,
                           const QuadratureOptions& options) {
  const double Q = u.Q();
  params.validate(Q);
  const auto h = renyi_entropy(u, params.alpha, options);
  const auto m = moment(u, params.b, options);
  const auto k = sharp_renyi_constant(params, Q, u.sphere_measure());
  InequalityReport r = base_report(InequalityKind::renyi, u);
  r.params = params;
  r.lhs = h.value;
  r.rhs = (Q / params.b) * (k.log_K + std::log(m.value));
  r.gap = r.rhs - r.lhs;
  r.quad_error = h.quad_error + (Q / params.b) * m.quad_error / m.value;
  r.details = {{"K", k.K}, {"moment", m.value}};
  add_sphere_details(r, u);
  return r;
}

InequalityReport shannon_gap(const DensitySpec& u, const QuadratureOptions& options) {
  const double Q = u.Q();
  const auto h = shannon_entropy(u, options);
  const auto m = moment(u, 2.0, options);
  const double cg = shannon_constant(Q, u.sphere_measure());
  InequalityReport r = base_report(InequalityKind::shannon, u);
  r.lhs = h.value;
  r.rhs = 0.5 * Q * (std::log(cg) + std::log(m.value));
  r.gap = r.rhs - r.lhs;
  r.quad_error = h.quad_error + 0.5 * Q * m.quad_error / m.value;
  r.details = {{"C_G", cg}, {"second_moment", m.value}};
  add_sphere_details(r, u);
  return r;
}

InequalityReport logsob_gap(const DensitySpec& u, double A, const FisherOptions& options) {
  if (!(A > 0.0)) throw std::invalid_argument("log-Sobolev constant must be positive");
  const double Q = u.Q();
  const auto h = shannon_entropy(u, options.quadrature);
  const auto j = horizontal_fisher(u, options);
  InequalityReport r = base_report(InequalityKind::log_sobolev, u);
  r.lhs = -h.value;
  r.rhs = 0.5 * Q * std::log(0.25 * A * j.value);
  r.gap = r.rhs - r.lhs;
  r.quad_error = h.quad_error + 0.5 * Q * j.quad_error / j.value;
  r.possibly_divergent = j.possibly_divergent;
  r.details = {{"A", A}, {"fisher", j.value}, {"sphere_factor", j.sphere_factor}};
  add_sphere_details(r, u);
  return r;
}

InequalityReport uncertainty_check(const DensitySpec& u, double A, const FisherOptions& options) {
  const double Q = u.Q();
  const auto m = moment(u, 2.0, options.quadrature);
  const auto j = horizontal_fisher(u, options);
  const double bound = uncertainty_bound(Q, u.sphere_measure(), A);
  InequalityReport r = base_report(InequalityKind::uncertainty, u);
  const double product = m.value * j.value;
  r.lhs = bound;
  r.rhs = product;
  r.gap = product - bound;
  r.quad_error = product * (m.quad_error / m.value + j.quad_error / j.value);
  r.possibly_divergent = j.possibly_divergent;
  r.details = {{"A", A}, {"second_moment", m.value}, {"fisher", j.value}};
  if (u.group().all_unit_weights() && u.norm().kind == NormKind::euclidean) {
    const double n = u.group().dimension();
    r.details.emplace_back("classical_product_sqrt", std::sqrt(product));
    r.details.emplace_back("classical_bound", n);
    r.details.emplace_back("classical_gap", std::sqrt(product) - n);
  }
  add_sphere_details(r, u);
  return r;
}

InequalityReport stam_gap(const DensitySpec& u, const FisherOptions& options) {
  if (!u.group().all_unit_weights()) {
    throw std::invalid_argument("Stam's inequality is evaluated on euclidean R^n only");
  }
  const double n = u.group().dimension();
  FisherOptions euclidean = options;
  euclidean.frame = HorizontalFrame::euclidean;
  const auto h = shannon_entropy(u, options.quadrature);
  const auto j = horizontal_fisher(u, euclidean);
  InequalityReport r = base_report(InequalityKind::stam_euclidean, u);
  r.lhs = -0.5 * n * std::log(j.value / (2.0 * n * std::numbers::pi * std::numbers::e));
  r.rhs = h.value;
  r.gap = r.rhs - r.lhs;
  r.quad_error = h.quad_error + 0.5 * n * j.quad_error / j.value;
  r.possibly_divergent = j.possibly_divergent;
  r.details = {{"fisher", j.value}};
  return r;
}

}  // namespace anisoent
