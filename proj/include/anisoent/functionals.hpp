#pragma once

// Entropies, moments, horizontal Fisher information, and the gap evaluators
// for the Renyi, Shannon, log-Sobolev, uncertainty and Stam inequalities.

#include "anisoent/densities.hpp"
#include "anisoent/sharp_constants.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace anisoent {

struct FunctionalEstimate {
  double value = 0.0;
  double quad_error = 0.0;
};

// (1/(1-alpha)) ln int u^alpha, with u^alpha = exp(alpha ln u) and 0^alpha = 0.
FunctionalEstimate renyi_entropy(const DensitySpec& u, double alpha,
                                 const QuadratureOptions& options = default_quadrature_options());

// -int u ln u, with 0 ln 0 = 0.
FunctionalEstimate shannon_entropy(const DensitySpec& u,
                                   const QuadratureOptions& options = default_quadrature_options());

// int |x|^b u dx.
FunctionalEstimate moment(const DensitySpec& u, double b,
                          const QuadratureOptions& options = default_quadrature_options());

struct FisherOptions {
  // Unset: default_frame(group).
  std::optional<HorizontalFrame> frame;
  // Monte Carlo budget for the sphere average of |grad_H |x||^2, used
  // whenever that average is not identically one.
  std::uint64_t samples = 400'000;
  std::uint64_t seed = 20240601;
  QuadratureOptions quadrature = default_quadrature_options();
};

struct FisherEstimate {
  double value = 0.0;
  double quad_error = 0.0;
  // Refinement changed the value by more than 1% or the tolerance was not met.
  bool possibly_divergent = false;
  // Mean of |grad_H |x||^2 over the unit sphere and its Monte Carlo error.
  double sphere_factor = 1.0;
  double sphere_factor_error = 0.0;
};

// int |grad_H u|^2 / u dx. For u = g(|x|) this is
//   |S| <|grad_H |x||^2>_S int g'(r)^2 / g(r) r^{Q-1} dr.
FisherEstimate horizontal_fisher(const DensitySpec& u, const FisherOptions& options = {});

enum class InequalityKind { renyi, shannon, log_sobolev, uncertainty, stam_euclidean };

std::string to_string(InequalityKind kind);

struct InequalityReport {
  InequalityKind inequality = InequalityKind::renyi;
  double lhs = 0.0;
  double rhs = 0.0;
  // Always rhs - lhs, with sides ordered so that the inequality reads
  // lhs <= rhs. Uncertainty: lhs = 4/(C_G A), rhs = M_2 J. Stam: lhs is the
  // Fisher lower bound, rhs = h[u].
  double gap = 0.0;
  double quad_error = 0.0;
  std::optional<EntropyParams> params;
  std::string group_id;
  std::string norm_id;
  // Secondary quantities (moments, constants, classical comparisons).
  std::vector<std::pair<std::string, double>> details;
  bool possibly_divergent = false;

  // gap < -factor * quad_error.
  bool violated(double factor = 10.0) const { return gap < -factor * quad_error; }
};

InequalityReport renyi_gap(const DensitySpec& u, const EntropyParams& params,
                           const QuadratureOptions& options = default_quadrature_options());

InequalityReport shannon_gap(const DensitySpec& u,
                             const QuadratureOptions& options = default_quadrature_options());

// (Q/2) ln((A/4) J[u]) - int u ln u.
InequalityReport logsob_gap(const DensitySpec& u, double A, const FisherOptions& options = {});

// M_2 J[u] - 4 / (C_G A). Euclidean groups also report sqrt(M_2 J) vs n.
InequalityReport uncertainty_check(const DensitySpec& u, double A, const FisherOptions& options = {});

// h[u] + (n/2) ln(J[u] / (2 n pi e)), euclidean only.
InequalityReport stam_gap(const DensitySpec& u, const FisherOptions& options = {});

}  // namespace anisoent
