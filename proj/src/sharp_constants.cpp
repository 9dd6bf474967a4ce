#include "anisoent/sharp_constants.hpp"

#include "anisoent/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace anisoent {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParameters(std::string(what) + " must be positive and finite");
  }
}

void require_branch(const EntropyParams& p, Branch want, const char* where) {
  if (p.branch() != want) {
    throw InvalidParameters(std::string(where) +
                            (want == Branch::below_one ? " requires alpha < 1" : " requires alpha > 1"));
  }
}

// alpha b - Q (1 - alpha), positive on the valid alpha < 1 range.
double below_gap(const EntropyParams& p, double Q) { return p.alpha * p.b - Q * (1.0 - p.alpha); }
// alpha b + Q (alpha - 1).
double above_sum(const EntropyParams& p, double Q) { return p.alpha * p.b + Q * (p.alpha - 1.0); }

}  // namespace

std::string to_string(Branch branch) {
  return branch == Branch::below_one ? "below_one" : "above_one";
}

void EntropyParams::validate(double Q) const {
  require_positive(Q, "Q");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidParameters("invalid: alpha must be positive");
  if (alpha == 1.0) throw InvalidParameters("invalid: alpha = 1 (use the Shannon constant)");
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidParameters("invalid: b must be positive");
  if (alpha < 1.0 && !(below_gap(*this, Q) > 0.0)) {
    throw InvalidParameters("invalid: b <= Q(1/alpha-1)");
  }
}

double log_c1(const EntropyParams& p, double Q, double sphere) {
  require_branch(p, Branch::below_one, "c1");
  p.validate(Q);
  require_positive(sphere, "sphere measure");
  const double s = 1.0 / (1.0 - p.alpha);
  const double qb = Q / p.b;
  return std::log(p.b) - std::log(sphere) + log_gamma(s) - log_gamma(s - qb) - log_gamma(qb);
}

double log_c2(const EntropyParams& p, double Q, double sphere) {
  require_branch(p, Branch::above_one, "c2");
  p.validate(Q);
  require_positive(sphere, "sphere measure");
  const double c = p.alpha / (p.alpha - 1.0);
  const double qb = Q / p.b;
  if (!std::isfinite(c)) throw InvalidParameters("invalid: alpha/(alpha-1) is not finite");
  return std::log(p.b) - std::log(sphere) + log_gamma(c + qb) - log_gamma(c) - log_gamma(qb);
}

double c1(const EntropyParams& p, double Q, double sphere) { return std::exp(log_c1(p, Q, sphere)); }
double c2(const EntropyParams& p, double Q, double sphere) { return std::exp(log_c2(p, Q, sphere)); }

double phi1_alpha_norm(const EntropyParams& p, double Q, double sphere) {
  const double lc = log_c1(p, Q, sphere);
  return std::exp((p.alpha - 1.0) * lc + std::log(p.alpha * p.b / below_gap(p, Q)));
}

double phi2_alpha_norm(const EntropyParams& p, double Q, double sphere) {
  const double lc = log_c2(p, Q, sphere);
  return std::exp((p.alpha - 1.0) * lc + std::log(p.alpha * p.b / above_sum(p, Q)));
}

double phi1_moment(const EntropyParams& p, double Q) {
  require_branch(p, Branch::below_one, "phi1_moment");
  p.validate(Q);
  return Q * (1.0 - p.alpha) / below_gap(p, Q);
}

double phi2_moment(const EntropyParams& p, double Q) {
  require_branch(p, Branch::above_one, "phi2_moment");
  p.validate(Q);
  return Q * (p.alpha - 1.0) / above_sum(p, Q);
}

SharpConstantResult sharp_renyi_constant(const EntropyParams& p, double Q, double sphere) {
  p.validate(Q);
  require_positive(sphere, "sphere measure");
  SharpConstantResult r;
  r.branch = p.branch();
  const double ab = p.alpha * p.b;
  if (r.branch == Branch::below_one) {
    const double q1a = Q * (1.0 - p.alpha);
    const double lc = log_c1(p, Q, sphere);
    // ln(ab / (ab - q1a)) = -log1p(-q1a / ab)
    const double log_a = -lc - std::log1p(-q1a / ab) / (1.0 - p.alpha) +
                         (Q / p.b) * std::log(below_gap(p, Q) / q1a);
    r.log_K = (p.b / Q) * log_a;
    r.A_stated = std::exp(log_a);
    r.ingredients = {std::exp(lc), phi1_alpha_norm(p, Q, sphere), phi1_moment(p, Q)};
  } else {
    const double qa1 = Q * (p.alpha - 1.0);
    const double lc = log_c2(p, Q, sphere);
    const double common = std::log(ab / qa1) + ((qa1 + p.b) / qa1) * std::log1p(qa1 / ab);
    r.log_K = common - (p.b / Q) * lc;
    const double c = p.alpha / (p.alpha - 1.0);
    const double qb = Q / p.b;
    const double log_inverted_ratio =
        std::log(p.b) - std::log(sphere) + log_gamma(qb) + log_gamma(c) - log_gamma(c + qb);
    r.A_stated = std::exp(common - (p.b / Q) * log_inverted_ratio);
    r.ingredients = {std::exp(lc), phi2_alpha_norm(p, Q, sphere), phi2_moment(p, Q)};
  }
  r.K = std::exp(r.log_K);
  return r;
}

double shannon_constant(double Q, double sphere) {
  require_positive(Q, "Q");
  require_positive(sphere, "sphere measure");
  const double log_cg = std::log(2.0) + 1.0 - std::log(Q) +
                        (2.0 / Q) * (std::log(sphere) + log_gamma(0.5 * Q) - std::log(2.0));
  return std::exp(log_cg);
}

std::string to_string(LogSobolevGroup group) {
  switch (group) {
    case LogSobolevGroup::heisenberg: return "heisenberg";
    case LogSobolevGroup::euclidean: return "euclidean";
    case LogSobolevGroup::custom: return "custom";
  }
  return "unknown";
}

double log_sobolev_constant(LogSobolevGroup group, int n, double custom_value) {
  constexpr double pi = std::numbers::pi;
  switch (group) {
    case LogSobolevGroup::heisenberg: {
      if (n < 1) throw InvalidParameters("heisenberg log-Sobolev constant needs n >= 1");
      const double nd = n;
      return std::exp(log_gamma(nd + 1.0) / (nd + 1.0)) / (pi * nd * nd);
    }
    case LogSobolevGroup::euclidean: {
      if (n < 3) {
        std::ostringstream os;
        os << "euclidean log-Sobolev constant (pi n^2 - 2 pi n)^{-1/2} Gamma(n)/Gamma(n/2) "
              "degenerates for n = "
           << n << " (pi n^2 - 2 pi n <= 0); supply A as a custom value";
        throw InvalidParameters(os.str());
      }
      const double nd = n;
      return std::exp(-0.5 * std::log(pi * nd * nd - 2.0 * pi * nd) + log_gamma(nd) -
                      log_gamma(0.5 * nd));
    }
    case LogSobolevGroup::custom:
      require_positive(custom_value, "custom log-Sobolev constant");
      return custom_value;
  }
  return 0.0;
}

double uncertainty_bound(double Q, double sphere, double A) {
  require_positive(A, "log-Sobolev constant A");
  return 4.0 / (shannon_constant(Q, sphere) * A);
}

double dilation_objective(const EntropyParams& p, double Q, double sphere, double moment,
                          double u_alpha_norm, double lambda) {
  p.validate(Q);
  require_positive(moment, "moment");
  require_positive(lambda, "lambda");
  if (p.branch() == Branch::below_one) {
    const double e = Q * (1.0 / p.alpha - 1.0);
    return std::pow(lambda, e) + std::pow(lambda, e - p.b) * moment;
  }
  require_positive(u_alpha_norm, "||u||_alpha");
  const double c2_pow = std::exp((p.alpha - 1.0) * log_c2(p, Q, sphere));
  const double phi2_pow = std::pow(phi2_alpha_norm(p, Q, sphere), (p.alpha - 1.0) / p.alpha);
  return std::pow(lambda, -p.b) * c2_pow * moment +
         std::pow(lambda, Q * (1.0 - 1.0 / p.alpha)) * phi2_pow * u_alpha_norm;
}

double optimal_dilation(const EntropyParams& p, double Q, double sphere, double moment,
                        double u_alpha_norm) {
  p.validate(Q);
  require_positive(moment, "moment");
  if (p.branch() == Branch::below_one) {
    return std::pow(below_gap(p, Q) / (Q * (1.0 - p.alpha)) * moment, 1.0 / p.b);
  }
  require_positive(u_alpha_norm, "||u||_alpha");
  const double c2_pow = std::exp((p.alpha - 1.0) * log_c2(p, Q, sphere));
  const double phi2_pow = std::pow(phi2_alpha_norm(p, Q, sphere), (p.alpha - 1.0) / p.alpha);
  const double base = p.b * p.alpha * c2_pow * moment /
                      (phi2_pow * Q * (p.alpha - 1.0) * u_alpha_norm);
  return std::pow(base, p.alpha / above_sum(p, Q));
}

}  // namespace anisoent
