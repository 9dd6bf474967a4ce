#pragma once

// Gamma, log-Gamma, Beta and the Stirling approximation.
//
// Every closed-form constant in the library is assembled from log_gamma, so
// large arguments (Gamma(c) with c = alpha/(alpha-1) -> infinity as alpha -> 1)
// never overflow.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace anisoent {

// A value that is stored as its natural logarithm when the direct value is
// not representable.
template <typename Scalar = double>
struct SpecialValue {
  Scalar value{};
  bool log_scale = false;

  Scalar log() const { return log_scale ? value : std::log(value); }
  Scalar direct() const { return log_scale ? std::exp(value) : value; }
};

namespace detail {

template <typename Scalar>
void require_positive(Scalar x, const char* where) {
  if (!std::isfinite(x) || !(x > Scalar(0))) {
    throw std::domain_error(std::string(where) +
                            ": argument must be positive and finite");
  }
}

// Lanczos approximation, g = 7, nine terms.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace detail

// ln Gamma(x) for x > 0.
template <typename Scalar>
Scalar log_gamma(Scalar x) {
  detail::require_positive(x, "log_gamma");
  if (x < Scalar(0.5)) {
    // Upward recurrence keeps the Lanczos sum away from its poles.
    return log_gamma(x + Scalar(1)) - std::log(x);
  }
  const Scalar z = x - Scalar(1);
  Scalar sum = Scalar(detail::kLanczosCoefficients[0]);
  for (std::size_t i = 1; i < detail::kLanczosCoefficients.size(); ++i) {
    sum += Scalar(detail::kLanczosCoefficients[i]) / (z + Scalar(i));
  }
  const Scalar t = z + Scalar(detail::kLanczosG) + Scalar(0.5);
  const Scalar half_log_two_pi =
      Scalar(0.5) * std::log(Scalar(2) * std::numbers::pi_v<Scalar>);
  return half_log_two_pi + (z + Scalar(0.5)) * std::log(t) - t + std::log(sum);
}

// Gamma(x), switching to log scale once exp would overflow.
template <typename Scalar>
SpecialValue<Scalar> gamma(Scalar x) {
  const Scalar lg = log_gamma(x);
  if (lg > std::log(std::numeric_limits<Scalar>::max()) - Scalar(1)) {
    return {lg, true};
  }
  return {std::exp(lg), false};
}

template <typename Scalar>
Scalar log_beta(Scalar x, Scalar y) {
  detail::require_positive(x, "beta");
  detail::require_positive(y, "beta");
  return log_gamma(x) + log_gamma(y) - log_gamma(x + y);
}

// B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y), evaluated through log-Gamma.
template <typename Scalar>
Scalar beta(Scalar x, Scalar y) {
  return std::exp(log_beta(x, y));
}

// ln of sqrt(2 pi) e^{-x} x^{x - 1/2}.
template <typename Scalar>
Scalar log_stirling_gamma(Scalar x) {
  detail::require_positive(x, "stirling_gamma");
  return Scalar(0.5) * std::log(Scalar(2) * std::numbers::pi_v<Scalar>) - x +
         (x - Scalar(0.5)) * std::log(x);
}

// Stirling's approximation sqrt(2 pi) e^{-x} x^{x - 1/2}. Deliberately
// approximate; never used when assembling constants.
template <typename Scalar>
Scalar stirling_gamma(Scalar x) {
  return std::exp(log_stirling_gamma(x));
}

}  // namespace anisoent
