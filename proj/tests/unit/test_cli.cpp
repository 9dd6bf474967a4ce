#include "cli.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using anisoent::cli::run;
using Catch::Matchers::ContainsSubstring;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

// Runs inside the golden directory so that embedded input paths are relative.
Result invoke(const std::vector<std::string>& args) {
  const auto previous = fs::current_path();
  fs::current_path(ANISOENT_GOLDEN_DIR);
  std::ostringstream out, err;
  Result r;
  r.code = run(args, out, err);
  fs::current_path(previous);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_golden(const std::string& name, const std::vector<std::string>& args, int expected_code = 0) {
  const auto r = invoke(args);
  INFO(r.err);
  CHECK(r.code == expected_code);
  const fs::path path = fs::path(ANISOENT_GOLDEN_DIR) / name;
  if (std::getenv("ANISOENT_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << r.out;
  }
  REQUIRE(fs::exists(path));
  CHECK(r.out == slurp(path));
}

}  // namespace

TEST_CASE("golden: constants table", "[cli]") {
  check_golden("constants.csv", {"constants", "--weights", "1", "--alpha", "0.5,2,3", "--b", "1,2", "--format", "csv"});
  check_golden("constants.json", {"constants", "--weights", "1,1,2", "--alpha", "0.8,2", "--b", "2",
                                  "--samples", "20000"});
}

TEST_CASE("golden: limit scan", "[cli]") {
  check_golden("limit_scan_q1.csv", {"limit-scan", "--weights", "1", "--format", "csv"});
  check_golden("limit_scan_q4.csv", {"limit-scan", "--weights", "1,1,1,1", "--format", "csv"});
}

TEST_CASE("golden: sphere measure", "[cli]") {
  check_golden("sphere_r3.csv", {"sphere-measure", "--weights", "1,1,1", "--format", "csv"});
  check_golden("sphere_h1.json", {"sphere-measure", "--weights", "1,1,2", "--samples", "50000", "--seed", "9"});
  check_golden("sphere_w12.csv", {"sphere-measure", "--group", "inputs/weights12.json", "--samples", "50000",
                                  "--format", "csv"});
}

TEST_CASE("golden: verification runs", "[cli]") {
  check_golden("verify_shannon_gaussian.csv",
               {"verify-shannon", "--weights", "1,1,1", "--density", "inputs/gaussian3.json", "--format", "csv"});
  check_golden("verify_logsob_gaussian.json",
               {"verify-logsob", "--weights", "1,1,1", "--density", "inputs/gaussian3.json"});
  check_golden("verify_renyi_h1.csv", {"verify-renyi", "--density", "inputs/h1_mixture.json", "--alpha", "0.8,1.5,3",
                                       "--b", "1,2", "--samples", "50000", "--format", "csv"});
  check_golden("verify_uncertainty_h1.json",
               {"verify-uncertainty", "--density", "inputs/h1_mixture.json", "--samples", "50000"});
  check_golden("sharpness_r2.csv", {"sharpness-scan", "--weights", "1,1", "--alpha", "0.6,0.8,1.5,2", "--b", "1,2",
                                    "--format", "csv"});
}

TEST_CASE("constants rows carry status for invalid parameters", "[cli]") {
  const auto r = invoke({"constants", "--weights", "1", "--alpha", "0.5", "--b", "1", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("invalid: b <= Q(1/alpha-1)"));
  const auto ok = invoke({"constants", "--weights", "1", "--alpha", "2,1/2", "--b", "2"});
  const auto doc = nlohmann::json::parse(ok.out);
  CHECK(std::abs(doc["rows"][0]["K"].get<double>() - 125.0 / 9.0) < 1e-12);
  CHECK(std::abs(doc["rows"][1]["K"].get<double>() / (4.0 * M_PI * M_PI) - 1.0) < 1e-12);
}

TEST_CASE("limit scan header and b restriction", "[cli]") {
  const auto r = invoke({"limit-scan", "--weights", "1", "--alpha", "1.001", "--format", "csv"});
  std::istringstream lines(r.out);
  std::string config, header, row;
  std::getline(lines, config);
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(config.rfind("# config: {", 0) == 0);
  CHECK(header == "alpha,K,C_G,ratio");
  const double ratio = std::stod(row.substr(row.rfind(',') + 1));
  CHECK(std::abs(ratio - 1.0) < 0.01);
  CHECK(invoke({"limit-scan", "--weights", "1", "--b", "3"}).code == anisoent::cli::kUsage);
}

TEST_CASE("exit statuses", "[cli]") {
  CHECK(invoke({}).code == anisoent::cli::kUsage);
  CHECK(invoke({"bogus"}).code == anisoent::cli::kUsage);
  CHECK(invoke({"constants", "--weights", "1"}).code == anisoent::cli::kUsage);
  CHECK(invoke({"verify-shannon", "--weights", "1,1"}).code == anisoent::cli::kUsage);
  CHECK(invoke({"verify-logsob", "--weights", "1,1", "--density", "inputs/gaussian3.json"}).code ==
        anisoent::cli::kUsage);
  CHECK(invoke({"constants", "--help"}).code == 0);
  const auto bad = invoke({"verify-shannon", "--weights", "1", "--density", "inputs/bad_weight.json"});
  CHECK(bad.code == anisoent::cli::kUsage);
  CHECK_THAT(bad.err, ContainsSubstring("inputs/bad_weight.json: density.components[1].weight"));
  const auto missing = invoke({"verify-shannon", "--weights", "1", "--density", "inputs/none.json"});
  CHECK(missing.code == anisoent::cli::kUsage);
}

TEST_CASE("a custom constant that is too large reports a violation", "[cli]") {
  // With A = 0.01 the bound 4/(C_G A) is about 70, far above the Gaussian product 9.
  const auto r = invoke({"verify-uncertainty", "--weights", "1,1,1", "--density", "inputs/gaussian3.json",
                         "--A", "0.01"});
  CHECK(r.code == anisoent::cli::kViolation);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["summary"]["violations"] == 1);
}

TEST_CASE("identical configs give byte-identical output", "[cli]") {
  const std::vector<std::vector<std::string>> runs = {
      {"constants", "--weights", "1,2", "--alpha", "0.7,1.5", "--b", "1,2,3", "--samples", "30000"},
      {"sphere-measure", "--weights", "1,1,2", "--samples", "30000", "--seed", "4"},
      {"verify-renyi", "--density", "inputs/h1_mixture.json", "--alpha", "0.9,2", "--b", "2", "--samples", "30000"},
      {"verify-logsob", "--density", "inputs/h1_mixture.json", "--samples", "30000", "--format", "csv"},
  };
  for (const auto& args : runs) {
    ::setenv("ANISOENT_THREADS", "1", 1);
    const auto a = invoke(args);
    ::setenv("ANISOENT_THREADS", "4", 1);
    const auto b = invoke(args);
    ::unsetenv("ANISOENT_THREADS");
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("output file option", "[cli]") {
  const auto path = fs::temp_directory_path() / "anisoent_cli_out.json";
  const auto r = invoke({"constants", "--weights", "1", "--alpha", "2", "--b", "2", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const auto doc = nlohmann::json::parse(slurp(path));
  CHECK(doc["config"]["out"] == path.string());
  fs::remove(path);
}
