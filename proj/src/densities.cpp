#include "anisoent/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace anisoent {

std::string to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::phi1: return "phi1";
    case DensityKind::phi2: return "phi2";
    case DensityKind::gaussian: return "gaussian";
    case DensityKind::uniform_ball: return "uniform_ball";
    case DensityKind::dilated: return "dilated";
    case DensityKind::mixture: return "mixture";
  }
  return "unknown";
}

struct DensitySpec::Node {
  DensityKind kind = DensityKind::phi1;
  EntropyParams params;
  double C = 0.0;
  double sigma = 1.0;
  int n = 1;
  double radius = 1.0;
  double height = 0.0;
  std::shared_ptr<const Node> inner;
  double lambda = 1.0;
  double Q = 1.0;
  std::vector<std::pair<double, std::shared_ptr<const Node>>> parts;

  double profile(double r) const {
    switch (kind) {
      case DensityKind::phi1:
        return C * std::exp(std::log1p(std::pow(r, params.b)) / (params.alpha - 1.0));
      case DensityKind::phi2:
        if (r >= 1.0) return 0.0;
        return C * std::exp(std::log1p(-std::pow(r, params.b)) / (params.alpha - 1.0));
      case DensityKind::gaussian:
        return std::exp(-0.5 * n * std::log(2.0 * std::numbers::pi * sigma * sigma) -
                        r * r / (2.0 * sigma * sigma));
      case DensityKind::uniform_ball:
        return r <= radius ? height : 0.0;
      case DensityKind::dilated:
        return std::pow(lambda, Q) * inner->profile(lambda * r);
      case DensityKind::mixture: {
        double s = 0.0;
        for (const auto& [w, part] : parts) s += w * part->profile(r);
        return s;
      }
    }
    return 0.0;
  }

  double derivative(double r) const {
    switch (kind) {
      case DensityKind::phi1: {
        const double rb = std::pow(r, params.b);
        return profile(r) * params.b * std::pow(r, params.b - 1.0) /
               ((params.alpha - 1.0) * (1.0 + rb));
      }
      case DensityKind::phi2: {
        if (r >= 1.0) return 0.0;
        // C (1 - r^b)^{1/(a-1) - 1} * (-b r^{b-1}) / (a - 1)
        const double e = 1.0 / (params.alpha - 1.0) - 1.0;
        return -C * std::exp(e * std::log1p(-std::pow(r, params.b))) * params.b *
               std::pow(r, params.b - 1.0) / (params.alpha - 1.0);
      }
      case DensityKind::gaussian:
        return -r / (sigma * sigma) * profile(r);
      case DensityKind::uniform_ball:
        return 0.0;
      case DensityKind::dilated:
        return std::pow(lambda, Q + 1.0) * inner->derivative(lambda * r);
      case DensityKind::mixture: {
        double s = 0.0;
        for (const auto& [w, part] : parts) s += w * part->derivative(r);
        return s;
      }
    }
    return 0.0;
  }

  double log_profile(double r) const {
    constexpr double minus_inf = -std::numeric_limits<double>::infinity();
    switch (kind) {
      case DensityKind::phi1: {
        // ln(1 + r^b) without overflowing r^b.
        const double lr = params.b * std::log(r);
        const double l1p = lr > 30.0 ? lr + std::log1p(std::exp(-lr)) : std::log1p(std::exp(lr));
        return std::log(C) + l1p / (params.alpha - 1.0);
      }
      case DensityKind::phi2:
        if (r >= 1.0) return minus_inf;
        return std::log(C) + std::log1p(-std::pow(r, params.b)) / (params.alpha - 1.0);
      case DensityKind::gaussian:
        return -0.5 * n * std::log(2.0 * std::numbers::pi * sigma * sigma) - r * r / (2.0 * sigma * sigma);
      case DensityKind::uniform_ball:
        return r <= radius ? std::log(height) : minus_inf;
      case DensityKind::dilated:
        return Q * std::log(lambda) + inner->log_profile(lambda * r);
      case DensityKind::mixture: {
        std::vector<double> terms;
        double top = minus_inf;
        for (const auto& [w, part] : parts) {
          terms.push_back(std::log(w) + part->log_profile(r));
          top = std::max(top, terms.back());
        }
        if (top == minus_inf) return minus_inf;
        double sum = 0.0;
        for (double t : terms) sum += std::exp(t - top);
        return top + std::log(sum);
      }
    }
    return minus_inf;
  }

  // d/dr ln g, only meaningful where g > 0.
  double log_slope(double r) const {
    switch (kind) {
      case DensityKind::phi1: {
        const double b = params.b;
        const double am1 = params.alpha - 1.0;
        if (r == 0.0) {
          if (b == 1.0) return 1.0 / am1;
          return b > 1.0 ? 0.0 : -std::numeric_limits<double>::infinity();
        }
        return b / (r * am1 * (1.0 + std::exp(-b * std::log(r))));
      }
      case DensityKind::phi2: {
        if (r >= 1.0) return 0.0;
        const double b = params.b;
        if (r == 0.0 && b < 1.0) return -std::numeric_limits<double>::infinity();
        return -b * std::pow(r, b - 1.0) / ((params.alpha - 1.0) * (1.0 - std::pow(r, b)));
      }
      case DensityKind::gaussian:
        return -r / (sigma * sigma);
      case DensityKind::uniform_ball:
        return 0.0;
      case DensityKind::dilated:
        return lambda * inner->log_slope(lambda * r);
      case DensityKind::mixture: {
        const double total = log_profile(r);
        if (!std::isfinite(total)) return 0.0;
        double s = 0.0;
        for (const auto& [w, part] : parts) {
          const double l = part->log_profile(r);
          if (l == -std::numeric_limits<double>::infinity()) continue;
          s += std::exp(std::log(w) + l - total) * part->log_slope(r);
        }
        return s;
      }
    }
    return 0.0;
  }

  bool gradient_available() const {
    switch (kind) {
      case DensityKind::uniform_ball: return false;
      case DensityKind::dilated: return inner->gradient_available();
      case DensityKind::mixture:
        return std::all_of(parts.begin(), parts.end(),
                           [](const auto& p) { return p.second->gradient_available(); });
      default: return true;
    }
  }

  RadialDomain domain() const {
    RadialDomain d;
    switch (kind) {
      case DensityKind::phi1:
        break;
      case DensityKind::phi2:
        d.support = 1.0;
        break;
      case DensityKind::gaussian:
        d.scale = sigma;
        break;
      case DensityKind::uniform_ball:
        d.support = radius;
        d.scale = radius;
        break;
      case DensityKind::dilated: {
        d = inner->domain();
        d.support /= lambda;
        d.scale /= lambda;
        for (double& k : d.kinks) k /= lambda;
        break;
      }
      case DensityKind::mixture: {
        d.support = 0.0;
        double log_scale = 0.0;
        std::vector<double> kinks;
        for (const auto& [w, part] : parts) {
          const RadialDomain pd = part->domain();
          d.support = std::max(d.support, pd.support);
          log_scale += std::log(pd.scale);
          kinks.insert(kinks.end(), pd.kinks.begin(), pd.kinks.end());
          if (std::isfinite(pd.support)) kinks.push_back(pd.support);
        }
        d.scale = std::exp(log_scale / static_cast<double>(parts.size()));
        std::sort(kinks.begin(), kinks.end());
        kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
        for (double k : kinks) {
          if (k < d.support) d.kinks.push_back(k);
        }
        break;
      }
    }
    return d;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = to_string(kind);
    switch (kind) {
      case DensityKind::phi1:
      case DensityKind::phi2:
        j["alpha"] = params.alpha;
        j["b"] = params.b;
        break;
      case DensityKind::gaussian:
        j["sigma"] = sigma;
        break;
      case DensityKind::uniform_ball:
        j["radius"] = radius;
        break;
      case DensityKind::dilated:
        j["lambda"] = lambda;
        j["inner"] = inner->to_json();
        break;
      case DensityKind::mixture: {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& [w, part] : parts) {
          nlohmann::ordered_json c;
          c["weight"] = w;
          c["density"] = part->to_json();
          arr.push_back(std::move(c));
        }
        j["components"] = std::move(arr);
        break;
      }
    }
    return j;
  }
};

DensitySpec make_density(std::shared_ptr<const DensitySpec::Node> node,
                         std::shared_ptr<const GroupSpec> group,
                         std::shared_ptr<const QuasiNormSpec> norm) {
  DensitySpec u;
  u.node_ = std::move(node);
  u.group_ = std::move(group);
  u.norm_ = std::move(norm);
  const auto mass = integrate_radial([&](double r) { return u.node_->profile(r); }, u.Q(),
                                     u.sphere_measure(), u.node_->domain());
  u.residual_ = mass.value - 1.0;
  if (!(std::abs(u.residual_) <= kNormalizationTolerance)) {
    std::ostringstream os;
    os << to_string(u.node_->kind) << " density is not normalized: mass - 1 = " << u.residual_;
    throw std::invalid_argument(os.str());
  }
  return u;
}

namespace {

std::shared_ptr<const QuasiNormSpec> prepared_norm(const GroupSpec& group, const QuasiNormSpec& norm) {
  check_compatible(norm, group);
  auto n = std::make_shared<QuasiNormSpec>(norm);
  if (!n->sphere) {
    if (n->kind != NormKind::euclidean) {
      throw std::invalid_argument("norm '" + norm.id() +
                                  "' carries no sphere measure; estimate it with with_sphere_measure()");
    }
    n->sphere = sphere_measure(group, *n, 0, 0);
  }
  return n;
}

}  // namespace


DensityKind DensitySpec::kind() const { return node_->kind; }
bool DensitySpec::gradient_available() const { return node_->gradient_available(); }
double DensitySpec::profile(double r) const { return node_->profile(r); }
double DensitySpec::profile_derivative(double r) const { return node_->derivative(r); }
double DensitySpec::log_profile(double r) const { return node_->log_profile(r); }
double DensitySpec::log_profile_slope(double r) const { return node_->log_slope(r); }
RadialDomain DensitySpec::radial_domain() const { return node_->domain(); }
nlohmann::ordered_json DensitySpec::to_json() const { return node_->to_json(); }

double DensitySpec::operator()(const Point& x) const {
  return node_->profile(quasi_norm(x, *norm_, *group_));
}

Point DensitySpec::horizontal_gradient(const Point& x, HorizontalFrame frame) const {
  if (!gradient_available()) {
    throw std::invalid_argument(to_string(kind()) + " density has no gradient");
  }
  const double r = quasi_norm(x, *norm_, *group_);
  return node_->derivative(r) * horizontal_norm_gradient(x, *norm_, *group_, frame);
}

std::optional<EntropyParams> DensitySpec::extremizer_params() const {
  if (node_->kind == DensityKind::phi1 || node_->kind == DensityKind::phi2) return node_->params;
  return std::nullopt;
}

DensitySpec make_phi1(const EntropyParams& params, const GroupSpec& group, const QuasiNormSpec& norm) {
  auto n = prepared_norm(group, norm);
  auto node = std::make_shared<DensitySpec::Node>();
  node->kind = DensityKind::phi1;
  node->params = params;
  node->C = c1(params, group.Q(), n->sphere->value);
  node->Q = group.Q();
  return make_density(std::move(node), std::make_shared<GroupSpec>(group), std::move(n));
}

DensitySpec make_phi2(const EntropyParams& params, const GroupSpec& group, const QuasiNormSpec& norm) {
  auto n = prepared_norm(group, norm);
  auto node = std::make_shared<DensitySpec::Node>();
  node->kind = DensityKind::phi2;
  node->params = params;
  node->C = c2(params, group.Q(), n->sphere->value);
  node->Q = group.Q();
  return make_density(std::move(node), std::make_shared<GroupSpec>(group), std::move(n));
}

DensitySpec make_extremizer(const EntropyParams& params, const GroupSpec& group,
                            const QuasiNormSpec& norm) {
  return params.branch() == Branch::below_one ? make_phi1(params, group, norm)
                                              : make_phi2(params, group, norm);
}

DensitySpec make_gaussian(double sigma, int n) {
  return make_gaussian(sigma, GroupSpec::euclidean(n), QuasiNormSpec::euclidean());
}

DensitySpec make_gaussian(double sigma, const GroupSpec& group, const QuasiNormSpec& norm) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("gaussian sigma must be positive");
  if (norm.kind != NormKind::euclidean || !group.all_unit_weights()) {
    throw std::invalid_argument("gaussian densities are only defined on euclidean R^n");
  }
  auto nrm = prepared_norm(group, norm);
  auto node = std::make_shared<DensitySpec::Node>();
  node->kind = DensityKind::gaussian;
  node->sigma = sigma;
  node->n = group.dimension();
  node->Q = group.Q();
  return make_density(std::move(node), std::make_shared<GroupSpec>(group), std::move(nrm));
}

DensitySpec make_uniform_ball(double radius, const GroupSpec& group, const QuasiNormSpec& norm) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be positive");
  auto n = prepared_norm(group, norm);
  auto node = std::make_shared<DensitySpec::Node>();
  node->kind = DensityKind::uniform_ball;
  node->radius = radius;
  node->Q = group.Q();
  const double unit_volume = n->sphere->value / group.Q();
  node->height = 1.0 / (unit_volume * std::pow(radius, group.Q()));
  return make_density(std::move(node), std::make_shared<GroupSpec>(group), std::move(n));
}

DensitySpec dilate_density(const DensitySpec& u, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("dilation parameter must be positive");
  auto node = std::make_shared<DensitySpec::Node>();
  node->kind = DensityKind::dilated;
  node->inner = u.node_;
  node->lambda = lambda;
  node->Q = u.Q();
  return make_density(std::move(node), u.group_, u.norm_);
}

DensitySpec make_mixture(const std::vector<std::pair<double, DensitySpec>>& parts) {
  if (parts.empty()) throw std::invalid_argument("mixture needs at least one component");
  const DensitySpec& first = parts.front().second;
  double total = 0.0;
  auto node = std::make_shared<DensitySpec::Node>();
  node->kind = DensityKind::mixture;
  node->Q = first.Q();
  for (const auto& [w, u] : parts) {
    if (!(w > 0.0)) throw std::invalid_argument("mixture weights must be positive");
    if (!(u.group().weights() == first.group().weights()) || u.norm().kind != first.norm().kind ||
        u.sphere_measure() != first.sphere_measure()) {
      throw std::invalid_argument("mixture components must share group, norm and sphere measure");
    }
    total += w;
    node->parts.emplace_back(w, u.node_);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights must sum to 1");
  }
  return make_density(std::move(node), first.group_, first.norm_);
}

}  // namespace anisoent
