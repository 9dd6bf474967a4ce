#pragma once

// Closed-form constants of the anisotropic Renyi-Shannon inequality
//
//   h_alpha[u] <= (Q/b) ln(K * int |x|^b u dx),
//
// its extremizer ingredients, the Shannon constant C_G, the log-Sobolev
// constants and the uncertainty bound. Everything is assembled in log space.
//
// K is the "effective" constant: the number that sits directly in front of
// the moment. For alpha < 1 it equals A^{b/Q}; for alpha > 1 it is
//   (a b / (Q(a-1))) ((a b + Q(a-1)) / (a b))^{(Q(a-1)+b)/(Q(a-1))} C2^{-b/Q}
// used to the first power. Both branches give equality at their extremizer
// and converge to C_G as alpha -> 1 with b = 2.

#include <stdexcept>
#include <string>

namespace anisoent {

class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Branch { below_one, above_one };

std::string to_string(Branch branch);

struct EntropyParams {
  double alpha = 2.0;
  double b = 2.0;

  Branch branch() const { return alpha < 1.0 ? Branch::below_one : Branch::above_one; }

  // Throws InvalidParameters unless alpha > 0, alpha != 1, b > 0 and, for
  // alpha < 1, alpha b > Q (1 - alpha) strictly.
  void validate(double Q) const;
};

// (b/|S|) Gamma(1/(1-a)) / (Gamma(1/(1-a) - Q/b) Gamma(Q/b)); alpha < 1.
double c1(const EntropyParams& params, double Q, double sphere);
// (b/|S|) Gamma(a/(a-1) + Q/b) / (Gamma(a/(a-1)) Gamma(Q/b)); alpha > 1.
double c2(const EntropyParams& params, double Q, double sphere);
double log_c1(const EntropyParams& params, double Q, double sphere);
double log_c2(const EntropyParams& params, double Q, double sphere);

// ||phi_1||_alpha^alpha = C1^{a-1} a b / (a b - Q(1-a)).
double phi1_alpha_norm(const EntropyParams& params, double Q, double sphere);
// ||phi_2||_alpha^alpha = C2^{a-1} a b / (a b + Q(a-1)).
double phi2_alpha_norm(const EntropyParams& params, double Q, double sphere);

// int |x|^b phi_1 = Q(1-a) / (a b - Q(1-a)).
double phi1_moment(const EntropyParams& params, double Q);
// int |x|^b phi_2 = Q(a-1) / (a b + Q(a-1)).
double phi2_moment(const EntropyParams& params, double Q);

struct SharpConstantResult {
  double K = 0.0;
  double log_K = 0.0;
  // Closed-form A with K = A^{b/Q} below one. Above one this is the variant
  // with the inverted Gamma ratio raised to -b/Q; it does not give equality
  // at phi_2 and is reported for comparison only.
  double A_stated = 0.0;
  Branch branch = Branch::above_one;
  struct Ingredients {
    double C = 0.0;
    double extremizer_alpha_norm = 0.0;
    double extremizer_moment = 0.0;
  } ingredients;
};

SharpConstantResult sharp_renyi_constant(const EntropyParams& params, double Q, double sphere);

// C_G = (2e/Q) (|S| Gamma(Q/2) / 2)^{2/Q}.
double shannon_constant(double Q, double sphere);

enum class LogSobolevGroup { heisenberg, euclidean, custom };

std::string to_string(LogSobolevGroup group);

// heisenberg: (n!)^{1/(n+1)} / (pi n^2).
// euclidean:  (pi n^2 - 2 pi n)^{-1/2} Gamma(n) / Gamma(n/2), n >= 3 only.
// custom:     custom_value.
double log_sobolev_constant(LogSobolevGroup group, int n, double custom_value = 0.0);

// 4 / (C_G A).
double uncertainty_bound(double Q, double sphere, double A);

// Proof objective minimized over the dilation parameter.
//   below_one: M(l) = l^{Q(1/a-1)} + l^{Q(1/a-1)-b} moment
//   above_one: N(l) = l^{-b} C2^{a-1} moment + l^{Q(1-1/a)} ||phi2||_a^{a-1} ||u||_a
double dilation_objective(const EntropyParams& params, double Q, double sphere, double moment,
                          double u_alpha_norm, double lambda);

// Minimizer of dilation_objective:
//   below_one: ((a b - Q(1-a)) / (Q(1-a)) moment)^{1/b}
//   above_one: (b a C2^{a-1} moment / (||phi2||_a^{a-1} Q(a-1) ||u||_a))^{a/(b a + Q(a-1))}
// u_alpha_norm is ||u||_{L^alpha} (not its alpha-th power); ignored below one.
double optimal_dilation(const EntropyParams& params, double Q, double sphere, double moment,
                        double u_alpha_norm = 1.0);

}  // namespace anisoent
