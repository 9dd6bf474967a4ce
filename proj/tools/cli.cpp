#include "cli.hpp"

#include "anisoent/functionals.hpp"
#include "anisoent/io.hpp"
#include "anisoent/sampling.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace anisoent::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string group_file;
  std::string weights;
  std::string norm;
  double exponent = 0.0;
  std::vector<double> alpha;
  std::vector<double> b;
  std::string density_file;
  std::uint64_t seed = 12345;
  std::uint64_t samples = 1'000'000;
  std::string out;
  std::string format = "json";
  std::optional<double> A;
  std::string logsob = "auto";
  bool monte_carlo = false;
};

double parse_number(std::string text, const std::string& flag) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.erase(0, 1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  if (text.find('/') != std::string::npos) {
    try {
      return parse_rational(text).to_double();
    } catch (const std::exception& e) {
      throw UsageError(flag + ": " + e.what());
    }
  }
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw UsageError(flag + ": cannot parse \"" + text + "\" as a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& p : split(text)) out.push_back(parse_number(p, flag));
  return out;
}

json nullable(const std::string& s) { return s.empty() ? json(nullptr) : json(s); }

json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["group_file"] = nullable(c.group_file);
  j["weights"] = nullable(c.weights);
  j["norm"] = nullable(c.norm);
  j["exponent"] = c.exponent;
  j["alpha"] = c.alpha;
  j["b"] = c.b;
  j["density_file"] = nullable(c.density_file);
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["out"] = nullable(c.out);
  j["format"] = c.format;
  j["A"] = c.A ? json(*c.A) : json(nullptr);
  j["logsob"] = c.logsob;
  j["monte_carlo"] = c.monte_carlo;
  const auto q = default_quadrature_options();
  j["quad_abs_tol"] = q.abs_tol;
  j["quad_rel_tol"] = q.rel_tol;
  return j;
}

struct Report {
  json config;
  json context = json::object();
  std::vector<std::string> columns;
  std::vector<json> rows;
  int violations = 0;
};

std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_null()) return "";
  if (v.is_number_float()) return io::format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string render(const Report& r, const std::string& format) {
  std::ostringstream os;
  if (format == "csv") {
    os << "# config: " << r.config.dump() << "\n";
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << "\n";
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < r.columns.size(); ++i) {
        os << (i ? "," : "") << csv_cell(row.contains(r.columns[i]) ? row[r.columns[i]] : json());
      }
      os << "\n";
    }
    return os.str();
  }
  json doc;
  doc["config"] = r.config;
  doc["context"] = r.context;
  doc["columns"] = r.columns;
  doc["rows"] = r.rows;
  doc["summary"] = {{"rows", r.rows.size()}, {"violations", r.violations}};
  os << doc.dump(2) << "\n";
  return os.str();
}

// Evaluates rows concurrently and keeps them in index order.
template <class Fn>
std::vector<json> evaluate_rows(std::size_t n, Fn&& fn) {
  std::vector<json> rows(n);
  parallel_for(n, [&](std::size_t i) { rows[i] = fn(i); });
  return rows;
}

struct Inputs {
  std::optional<io::GroupNorm> group;
  std::optional<DensitySpec> density;
};

Inputs load_inputs(const RunConfig& c, bool need_density) {
  if (!c.group_file.empty() && !c.weights.empty()) {
    throw UsageError("--group and --weights are mutually exclusive");
  }
  std::optional<nlohmann::json> doc;
  if (!c.density_file.empty()) {
    doc = io::read_json_file(c.density_file);
  } else if (need_density) {
    throw UsageError(c.command + " needs --density FILE");
  }
  Inputs in;
  const auto with_file = [](const std::string& file, auto&& fn) {
    try {
      return fn();
    } catch (const io::SpecError& e) {
      throw io::SpecError(file + ": " + e.what());
    }
  };
  if (!c.group_file.empty()) {
    auto g = io::read_json_file(c.group_file);
    in.group = with_file(c.group_file, [&] { return io::parse_group(g, c.samples, c.seed); });
  } else if (!c.weights.empty()) {
    std::vector<Rational> weights;
    for (const auto& w : split(c.weights)) {
      try {
        weights.push_back(parse_rational(w));
      } catch (const std::exception& e) {
        throw UsageError(std::string("--weights: ") + e.what());
      }
    }
    in.group = io::make_group(weights, c.norm, c.exponent, c.samples, c.seed, "--weights");
  } else if (doc && doc->is_object() && doc->contains("group")) {
    in.group = with_file(c.density_file, [&] {
      return io::parse_group((*doc)["group"], c.samples, c.seed, "group");
    });
  }
  if (!c.norm.empty() && c.weights.empty()) {
    throw UsageError("--norm only applies together with --weights");
  }
  if (!in.group) throw UsageError(c.command + " needs --group FILE or --weights LIST");
  if (doc) {
    const nlohmann::json& node =
        doc->is_object() && doc->contains("density") ? (*doc)["density"] : *doc;
    in.density = with_file(c.density_file, [&] { return io::parse_density(node, *in.group); });
  }
  return in;
}

json group_context(const io::GroupNorm& gn) {
  json j;
  j["group"] = gn.group.id();
  j["norm"] = gn.norm.id();
  j["Q"] = gn.group.Q();
  j["sphere_measure"] = io::sphere_json(*gn.norm.sphere);
  return j;
}

std::vector<std::pair<double, double>> grid(const std::vector<double>& alpha, const std::vector<double>& b) {
  std::vector<std::pair<double, double>> g;
  for (double a : alpha) {
    for (double bb : b) g.emplace_back(a, bb);
  }
  return g;
}

void require_grid(const RunConfig& c) {
  if (c.alpha.empty()) throw UsageError(c.command + " needs --alpha LIST");
  if (c.b.empty()) throw UsageError(c.command + " needs --b LIST");
}

json report_row(const InequalityReport& r) {
  json row;
  row["inequality"] = to_string(r.inequality);
  row["alpha"] = r.params ? json(r.params->alpha) : json(nullptr);
  row["b"] = r.params ? json(r.params->b) : json(nullptr);
  row["lhs"] = r.lhs;
  row["rhs"] = r.rhs;
  row["gap"] = r.gap;
  row["quad_error"] = r.quad_error;
  row["violated"] = r.violated();
  row["possibly_divergent"] = r.possibly_divergent;
  row["group"] = r.group_id;
  row["norm"] = r.norm_id;
  json details = json::object();
  for (const auto& [k, v] : r.details) details[k] = v;
  row["details"] = details;
  row["status"] = "ok";
  return row;
}

const std::vector<std::string> kReportColumns = {
    "inequality", "alpha", "b", "lhs", "rhs", "gap", "quad_error", "violated",
    "possibly_divergent", "group", "norm", "details", "status"};

int count_violations(const std::vector<json>& rows) {
  int v = 0;
  for (const auto& row : rows) {
    if (row.contains("violated") && row["violated"].is_boolean() && row["violated"].get<bool>()) ++v;
  }
  return v;
}

FisherOptions fisher_options(const RunConfig& c) {
  FisherOptions f;
  f.samples = std::max<std::uint64_t>(c.samples, 1000);
  f.seed = c.seed;
  return f;
}

double resolve_A(const RunConfig& c, const GroupSpec& group, json& context) {
  if (c.A) {
    context["log_sobolev"] = {{"source", "custom"}, {"A", *c.A}};
    return log_sobolev_constant(LogSobolevGroup::custom, 0, *c.A);
  }
  std::string mode = c.logsob;
  if (mode == "auto") {
    if (group.heisenberg_pattern()) mode = "heisenberg";
    else if (group.all_unit_weights()) mode = "euclidean";
    else throw UsageError("no log-Sobolev constant is known for " + group.id() + "; pass --A");
  }
  int n = 0;
  LogSobolevGroup kind = LogSobolevGroup::custom;
  if (mode == "heisenberg") {
    if (!group.heisenberg_pattern()) throw UsageError("--logsob heisenberg needs weights (1,...,1,2)");
    n = (group.dimension() - 1) / 2;
    kind = LogSobolevGroup::heisenberg;
  } else if (mode == "euclidean") {
    if (!group.all_unit_weights()) throw UsageError("--logsob euclidean needs unit weights");
    n = group.dimension();
    kind = LogSobolevGroup::euclidean;
  } else {
    throw UsageError("--logsob must be auto, heisenberg or euclidean");
  }
  double A = 0.0;
  try {
    A = log_sobolev_constant(kind, n, 0.0);
  } catch (const InvalidParameters& e) {
    throw UsageError(e.what());
  }
  context["log_sobolev"] = {{"source", mode}, {"n", n}, {"A", A}};
  return A;
}

Report cmd_constants(const RunConfig& c) {
  require_grid(c);
  const auto in = load_inputs(c, false);
  const auto& gn = *in.group;
  Report r;
  r.context = group_context(gn);
  r.columns = {"alpha", "b", "Q", "sphere_measure", "branch", "K", "A_stated", "C",
               "extremizer_alpha_norm", "extremizer_moment", "status"};
  const auto g = grid(c.alpha, c.b);
  const double Q = gn.group.Q();
  const double S = gn.norm.sphere->value;
  r.rows = evaluate_rows(g.size(), [&](std::size_t i) {
    const EntropyParams p{g[i].first, g[i].second};
    json row;
    row["alpha"] = p.alpha;
    row["b"] = p.b;
    row["Q"] = Q;
    row["sphere_measure"] = S;
    try {
      const auto k = sharp_renyi_constant(p, Q, S);
      row["branch"] = to_string(k.branch);
      row["K"] = k.K;
      row["A_stated"] = k.A_stated;
      row["C"] = k.ingredients.C;
      row["extremizer_alpha_norm"] = k.ingredients.extremizer_alpha_norm;
      row["extremizer_moment"] = k.ingredients.extremizer_moment;
      row["status"] = "ok";
    } catch (const InvalidParameters& e) {
      row["status"] = e.what();
    }
    return row;
  });
  return r;
}

Report cmd_verify(const RunConfig& c) {
  const auto in = load_inputs(c, true);
  const auto& gn = *in.group;
  const DensitySpec& u = *in.density;
  Report r;
  r.context = group_context(gn);
  r.context["density"] = u.to_json();
  r.context["normalization_residual"] = u.normalization_residual();
  r.columns = kReportColumns;
  if (c.command == "verify-renyi") {
    std::vector<double> alpha = c.alpha, b = c.b;
    if (alpha.empty() && b.empty() && u.extremizer_params()) {
      alpha = {u.extremizer_params()->alpha};
      b = {u.extremizer_params()->b};
    }
    if (alpha.empty() || b.empty()) throw UsageError("verify-renyi needs --alpha LIST and --b LIST");
    const auto g = grid(alpha, b);
    r.rows = evaluate_rows(g.size(), [&](std::size_t i) {
      const EntropyParams p{g[i].first, g[i].second};
      try {
        return report_row(renyi_gap(u, p));
      } catch (const std::exception& e) {
        json row;
        row["inequality"] = "renyi";
        row["alpha"] = p.alpha;
        row["b"] = p.b;
        row["status"] = e.what();
        return row;
      }
    });
  } else if (c.command == "verify-shannon") {
    r.rows = {report_row(shannon_gap(u))};
  } else if (c.command == "verify-logsob") {
    const double A = resolve_A(c, gn.group, r.context);
    r.rows = {report_row(logsob_gap(u, A, fisher_options(c)))};
    if (gn.group.all_unit_weights()) r.rows.push_back(report_row(stam_gap(u, fisher_options(c))));
  } else {
    const double A = resolve_A(c, gn.group, r.context);
    r.rows = {report_row(uncertainty_check(u, A, fisher_options(c)))};
  }
  r.violations = count_violations(r.rows);
  return r;
}

Report cmd_limit_scan(const RunConfig& c) {
  for (double b : c.b) {
    if (b != 2.0) throw UsageError("limit-scan fixes b = 2");
  }
  const auto in = load_inputs(c, false);
  const auto& gn = *in.group;
  std::vector<double> alpha = c.alpha;
  if (alpha.empty()) alpha = {0.9, 0.99, 0.999, 0.9999, 1.0001, 1.001, 1.01, 1.1};
  Report r;
  r.context = group_context(gn);
  r.columns = {"alpha", "K", "C_G", "ratio"};
  const double Q = gn.group.Q();
  const double S = gn.norm.sphere->value;
  const double cg = shannon_constant(Q, S);
  r.rows = evaluate_rows(alpha.size(), [&](std::size_t i) {
    json row;
    row["alpha"] = alpha[i];
    row["C_G"] = cg;
    try {
      const double K = sharp_renyi_constant({alpha[i], 2.0}, Q, S).K;
      row["K"] = K;
      row["ratio"] = K / cg;
    } catch (const InvalidParameters&) {
      row["K"] = nullptr;
      row["ratio"] = nullptr;
    }
    return row;
  });
  return r;
}

Report cmd_sharpness_scan(const RunConfig& c) {
  require_grid(c);
  const auto in = load_inputs(c, false);
  const auto& gn = *in.group;
  Report r;
  r.context = group_context(gn);
  r.columns = {"alpha", "b", "branch", "K", "gap", "quad_error", "normalization_residual",
               "gap_shrunk_K", "sharp", "status"};
  const auto g = grid(c.alpha, c.b);
  const double Q = gn.group.Q();
  std::vector<int> failed(g.size(), 0);
  r.rows = evaluate_rows(g.size(), [&](std::size_t i) {
    const EntropyParams p{g[i].first, g[i].second};
    json row;
    row["alpha"] = p.alpha;
    row["b"] = p.b;
    try {
      p.validate(Q);
      const auto u = make_extremizer(p, gn.group, gn.norm);
      const auto rep = renyi_gap(u, p);
      // The same inequality with K lowered by 0.1% must fail at the extremizer.
      const double shrunk = rep.gap + (Q / p.b) * std::log1p(-1e-3);
      const bool sharp = std::abs(rep.gap) <= std::max(10.0 * rep.quad_error, 1e-8) && shrunk < 0.0;
      row["branch"] = to_string(p.branch());
      row["K"] = rep.details.front().second;
      row["gap"] = rep.gap;
      row["quad_error"] = rep.quad_error;
      row["normalization_residual"] = u.normalization_residual();
      row["gap_shrunk_K"] = shrunk;
      row["sharp"] = sharp;
      row["status"] = "ok";
      failed[i] = sharp ? 0 : 1;
    } catch (const InvalidParameters& e) {
      row["status"] = e.what();
    }
    return row;
  });
  for (int f : failed) r.violations += f;
  return r;
}

Report cmd_sphere_measure(const RunConfig& c) {
  const auto in = load_inputs(c, false);
  const auto& gn = *in.group;
  Report r;
  r.context = group_context(gn);
  r.columns = {"group", "norm", "Q", "value", "std_error", "exact", "samples", "seed", "reference",
               "deviation_in_std_errors"};
  SphereMeasure s = *gn.norm.sphere;
  std::optional<double> reference;
  if (gn.norm.kind == NormKind::euclidean) {
    reference = s.value;
    if (c.monte_carlo) s = sphere_measure_monte_carlo(gn.group, gn.norm, c.samples, c.seed);
  }
  json row;
  row["group"] = gn.group.id();
  row["norm"] = gn.norm.id();
  row["Q"] = gn.group.Q();
  row["value"] = s.value;
  row["std_error"] = s.std_error;
  row["exact"] = s.exact;
  row["samples"] = s.samples;
  row["seed"] = s.seed;
  row["reference"] = reference ? json(*reference) : json(nullptr);
  row["deviation_in_std_errors"] =
      reference && s.std_error > 0.0 ? json((s.value - *reference) / s.std_error) : json(nullptr);
  r.rows = {row};
  return r;
}

void add_common(CLI::App* sub, RunConfig& c, std::string& alpha, std::string& b) {
  sub->add_option("--group", c.group_file, "Group/norm JSON file");
  sub->add_option("--weights", c.weights, "Comma-separated dilation weights, e.g. 1,1,2 or 1/2,1");
  sub->add_option("--norm", c.norm, "euclidean | koranyi | weighted_power (with --weights)");
  sub->add_option("--exponent", c.exponent, "weighted_power exponent 2*nu (default from the weights)");
  sub->add_option("--alpha", alpha, "Comma-separated alpha values");
  sub->add_option("--b", b, "Comma-separated moment orders");
  sub->add_option("--density", c.density_file, "Density JSON file");
  sub->add_option("--seed", c.seed, "Monte Carlo seed");
  sub->add_option("--samples", c.samples, "Monte Carlo sample count");
  sub->add_option("--out", c.out, "Output path (default stdout)");
  sub->add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::string alpha, b;
  std::optional<double> A;
  CLI::App app{"Sharp constants and entropy inequality checks on homogeneous groups", "anisoent"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"constants", "Table of sharp Renyi constants over an alpha x b grid"},
      {"verify-renyi", "Renyi entropy inequality for a density"},
      {"verify-shannon", "Shannon entropy inequality for a density"},
      {"verify-logsob", "Log-Sobolev inequality for a density (plus Stam on R^n)"},
      {"verify-uncertainty", "Uncertainty principle for a density"},
      {"limit-scan", "K(alpha, b=2) / C_G as alpha approaches 1"},
      {"sharpness-scan", "Renyi gap at the extremizer over an alpha x b grid"},
      {"sphere-measure", "Measure of the unit quasi-sphere"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, c, alpha, b);
    if (name == "verify-logsob" || name == "verify-uncertainty") {
      sub->add_option("--A", A, "Log-Sobolev constant (overrides --logsob)");
      sub->add_option("--logsob", c.logsob, "auto | heisenberg | euclidean");
    }
    if (name == "sphere-measure") {
      sub->add_flag("--monte-carlo", c.monte_carlo, "Estimate by Monte Carlo even when exact");
    }
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();
  c.A = A;

  try {
    if (!alpha.empty()) c.alpha = parse_list(alpha, "--alpha");
    if (!b.empty()) c.b = parse_list(b, "--b");
    Report r;
    if (c.command == "constants") r = cmd_constants(c);
    else if (c.command == "limit-scan") r = cmd_limit_scan(c);
    else if (c.command == "sharpness-scan") r = cmd_sharpness_scan(c);
    else if (c.command == "sphere-measure") r = cmd_sphere_measure(c);
    else r = cmd_verify(c);
    r.config = config_json(c);
    const std::string text = render(r, c.format);
    if (c.out.empty()) {
      out << text;
    } else {
      std::ofstream file(c.out, std::ios::binary);
      if (!file) throw UsageError("cannot write " + c.out);
      file << text;
    }
    if (r.violations > 0) {
      err << c.command << ": " << r.violations << " row(s) violated\n";
      return kViolation;
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const io::SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace anisoent::cli
