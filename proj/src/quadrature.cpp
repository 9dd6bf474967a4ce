#include "anisoent/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <queue>
#include <sstream>

namespace anisoent {

QuadratureOptions default_quadrature_options() {
  QuadratureOptions o;
  if (const char* env = std::getenv("ANISOENT_QUAD_TOL")) {
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end != env && tol > 0.0 && std::isfinite(tol)) {
      o.rel_tol = tol;
      o.abs_tol = tol / 10.0;
    }
  }
  return o;
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0, b = 0.0;
  double value = 0.0, error = 0.0;
  bool splittable = true;
  std::size_t order = 0;
};

double checked(const Integrand& f, double x) {
  const double v = f(x);
  if (std::isnan(v)) {
    std::ostringstream os;
    os << "integrand returned NaN at x = " << x;
    throw IntegrationError(os.str());
  }
  return v;
}

// QUADPACK qk15 with its error heuristic.
Panel gauss_kronrod(const Integrand& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, centre);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  double res_abs = std::abs(res_k);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 3; ++j) {
    const int k = 2 * j + 1;
    const double dx = half * kXgk[static_cast<std::size_t>(k)];
    f1[static_cast<std::size_t>(k)] = checked(f, centre - dx);
    f2[static_cast<std::size_t>(k)] = checked(f, centre + dx);
    const double sum = f1[static_cast<std::size_t>(k)] + f2[static_cast<std::size_t>(k)];
    res_g += kWg[static_cast<std::size_t>(j)] * sum;
    res_k += kWgk[static_cast<std::size_t>(k)] * sum;
    res_abs += kWgk[static_cast<std::size_t>(k)] *
               (std::abs(f1[static_cast<std::size_t>(k)]) + std::abs(f2[static_cast<std::size_t>(k)]));
  }
  for (int j = 0; j < 4; ++j) {
    const int k = 2 * j;
    const double dx = half * kXgk[static_cast<std::size_t>(k)];
    f1[static_cast<std::size_t>(k)] = checked(f, centre - dx);
    f2[static_cast<std::size_t>(k)] = checked(f, centre + dx);
    const double sum = f1[static_cast<std::size_t>(k)] + f2[static_cast<std::size_t>(k)];
    res_k += kWgk[static_cast<std::size_t>(k)] * sum;
    res_abs += kWgk[static_cast<std::size_t>(k)] *
               (std::abs(f1[static_cast<std::size_t>(k)]) + std::abs(f2[static_cast<std::size_t>(k)]));
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[7] * std::abs(fc - mean);
  for (std::size_t k = 0; k < 7; ++k) {
    res_asc += kWgk[k] * (std::abs(f1[k] - mean) + std::abs(f2[k] - mean));
  }
  const double width = std::abs(half);
  res_abs *= width;
  res_asc *= width;
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * res_abs, err);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = res_k * half;
  p.error = err;
  return p;
}

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.order > y.order;
  }
};

}  // namespace

IntegralEstimate integrate(const Integrand& f, double a, double b, const QuadratureOptions& options,
                           std::vector<double> breakpoints) {
  IntegralEstimate out;
  if (a == b) return out;
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("integrate: need finite a < b");
  }
  std::vector<double> edges{a};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double x : breakpoints) {
    if (x > edges.back() && x < b) edges.push_back(x);
  }
  edges.push_back(b);

  std::priority_queue<Panel, std::vector<Panel>, ByError> active;
  std::vector<Panel> frozen;
  std::size_t order = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = gauss_kronrod(f, edges[i], edges[i + 1]);
    p.order = order++;
    out.evaluations += 15;
    active.push(p);
  }

  const auto totals = [&] {
    // Sum in a fixed order (by left endpoint) for reproducibility.
    std::vector<Panel> all = frozen;
    auto copy = active;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double v = 0.0, e = 0.0;
    for (const auto& p : all) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };

  double value = 0.0, error = 0.0;
  {
    auto [v, e] = totals();
    value = v;
    error = e;
  }
  int intervals = static_cast<int>(active.size());
  while (error > std::max(options.abs_tol, options.rel_tol * std::abs(value))) {
    if (active.empty() || intervals >= options.max_intervals) break;
    Panel worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double tiny = std::max(1e3 * std::numeric_limits<double>::epsilon() *
                                     std::max(std::abs(worst.a), std::abs(worst.b)),
                                 std::numeric_limits<double>::min());
    if (worst.b - worst.a < tiny || !(mid > worst.a && mid < worst.b)) {
      frozen.push_back(worst);
      continue;
    }
    Panel left = gauss_kronrod(f, worst.a, mid);
    Panel right = gauss_kronrod(f, mid, worst.b);
    out.evaluations += 30;
    left.order = order++;
    right.order = order++;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
    ++intervals;
  }
  auto [v, e] = totals();
  out.value = v;
  out.abs_error = e;
  out.converged = e <= std::max(options.abs_tol, options.rel_tol * std::abs(v));
  if (!out.converged && options.throw_on_failure) {
    std::ostringstream os;
    os << "integral did not converge on [" << a << ", " << b << "]: estimate " << v
       << ", error " << e << " after " << intervals << " intervals";
    throw IntegrationError(os.str());
  }
  return out;
}

IntegralEstimate integrate_to_infinity(const Integrand& f, double a, double scale,
                                       const QuadratureOptions& options,
                                       std::vector<double> breakpoints) {
  if (!(scale > 0.0)) throw std::invalid_argument("integrate_to_infinity: scale must be positive");
  const double c = a + scale;
  std::vector<double> head_breaks, s_breaks;
  for (double r : breakpoints) {
    if (!(r > a) || !std::isfinite(r)) continue;
    if (r < c) {
      head_breaks.push_back(r);
    } else if (r > c) {
      const double v = std::log((r - a) / scale);
      s_breaks.push_back(v / (1.0 + v));
    }
  }
  // Tail: r = a + scale e^v, v = s / (1 - s). Algebraic decay in r becomes
  // exponential decay in v, which keeps the s = 1 end regular.
  const Integrand mapped = [&](double s) {
    const double one_minus = 1.0 - s;
    const double v = s / one_minus;
    if (v > 700.0) return 0.0;
    const double e = std::exp(v);
    const double fr = f(a + scale * e);
    if (fr == 0.0) return 0.0;
    return fr * scale * e / (one_minus * one_minus);
  };
  IntegralEstimate head = integrate(f, a, c, options, std::move(head_breaks));
  IntegralEstimate tail = integrate(mapped, 0.0, 1.0, options, std::move(s_breaks));
  head.value += tail.value;
  head.abs_error += tail.abs_error;
  head.evaluations += tail.evaluations;
  head.converged = head.converged && tail.converged;
  return head;
}

IntegralEstimate integrate_polar(const Integrand& h, double sphere, const RadialDomain& domain,
                                 const QuadratureOptions& options) {
  if (!(sphere > 0.0)) throw std::invalid_argument("integrate_polar: sphere measure must be positive");
  IntegralEstimate e;
  if (std::isfinite(domain.support)) {
    e = integrate(h, 0.0, domain.support, options, domain.kinks);
  } else {
    e = integrate_to_infinity(h, 0.0, domain.scale, options, domain.kinks);
  }
  e.value *= sphere;
  e.abs_error *= sphere;
  return e;
}

IntegralEstimate integrate_radial(const Integrand& profile, double Q, double sphere,
                                  const RadialDomain& domain, const QuadratureOptions& options) {
  if (!(Q > 0.0)) throw std::invalid_argument("integrate_radial: Q must be positive");
  return integrate_polar(
      [&](double r) {
        const double g = profile(r);
        if (g == 0.0) return 0.0;
        return g * std::pow(r, Q - 1.0);
      },
      sphere, domain, options);
}

BoxSampler::BoxSampler(Point lower, Point upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || (upper_.array() <= lower_.array()).any()) {
    throw std::invalid_argument("BoxSampler: need lower < upper componentwise");
  }
  volume_ = (upper_ - lower_).prod();
}

Point BoxSampler::sample(BlockRng& rng) const {
  Point x(lower_.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(lower_[i], upper_[i]);
  return x;
}

double BoxSampler::density(const Point& x) const {
  const bool inside = (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
  return inside ? 1.0 / volume_ : 0.0;
}

GaussianSampler::GaussianSampler(int dimension, double sigma)
    : GaussianSampler(Point::Constant(dimension, sigma)) {}

GaussianSampler::GaussianSampler(Point sigmas) : sigmas_(std::move(sigmas)) {
  if (sigmas_.size() < 1 || (sigmas_.array() <= 0.0).any()) {
    throw std::invalid_argument("GaussianSampler: scales must be positive");
  }
}

Point GaussianSampler::sample(BlockRng& rng) const {
  Point x(sigmas_.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = sigmas_[i] * rng.normal();
  return x;
}

double GaussianSampler::density(const Point& x) const {
  double log_p = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double z = x[i] / sigmas_[i];
    log_p += -0.5 * z * z - std::log(sigmas_[i]) - 0.5 * std::log(2.0 * std::numbers::pi);
  }
  return std::exp(log_p);
}

namespace {

struct Moments {
  double count = 0.0, mean = 0.0, m2 = 0.0;

  void add(double w) {
    count += 1.0;
    const double d = w - mean;
    mean += d / count;
    m2 += d * (w - mean);
  }

  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    const double n = count + o.count;
    const double d = o.mean - mean;
    mean += d * o.count / n;
    m2 += o.m2 + d * d * count * o.count / n;
    count = n;
  }
};

}  // namespace

IntegralEstimate integrate_mc(const std::function<double(const Point&)>& f,
                              const PointSampler& sampler, std::uint64_t n, std::uint64_t seed) {
  if (n < 1'000) throw std::invalid_argument("integrate_mc needs at least 1e3 samples");
  const std::uint64_t blocks = (n + kMonteCarloBlockSize - 1) / kMonteCarloBlockSize;
  std::vector<Moments> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    BlockRng rng(seed, b);
    const std::uint64_t begin = b * kMonteCarloBlockSize;
    const std::uint64_t end = std::min(n, begin + kMonteCarloBlockSize);
    Moments m;
    for (std::uint64_t i = begin; i < end; ++i) {
      const Point x = sampler.sample(rng);
      const double fx = f(x);
      const double p = sampler.density(x);
      if (std::isnan(fx)) throw IntegrationError("integrand returned NaN");
      double w = 0.0;
      if (fx != 0.0) {
        if (!(p > 0.0)) {
          throw IntegrationError("sampler density vanishes where the integrand does not (infinite weight)");
        }
        w = fx / p;
        if (!std::isfinite(w)) throw IntegrationError("infinite importance weight");
      }
      m.add(w);
    }
    partial[b] = m;
  });
  Moments total;
  for (const auto& m : partial) total.merge(m);
  IntegralEstimate out;
  out.value = total.mean;
  out.abs_error = std::sqrt(total.m2 / (total.count - 1.0) / total.count);
  out.evaluations = static_cast<std::int64_t>(n);
  return out;
}

}  // namespace anisoent
