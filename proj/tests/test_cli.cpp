#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string cli_path() {
  const char* path = std::getenv("BENTHOS_CLI");
  REQUIRE_MESSAGE(path != nullptr,
                  "BENTHOS_CLI must point at the benthos binary");
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string temp_path(const std::string& tag) {
  static int counter = 0;
  return "/tmp/benthos_cli_" + std::to_string(getpid()) + "_" +
         std::to_string(counter++) + "_" + tag;
}

// prefix lets tests set environment variables, e.g. "BENTHOS_SEED=99 ".
CliResult run_cli(const std::string& args, const std::string& prefix = "") {
  const std::string out_file = temp_path("out");
  const std::string err_file = temp_path("err");
  const std::string cmd = prefix + "\"" + cli_path() + "\" " + args + " >" +
                          out_file + " 2>" + err_file;
  const int raw = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = read_file(out_file);
  result.err = read_file(err_file);
  std::remove(out_file.c_str());
  std::remove(err_file.c_str());
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double field_value(const std::string& text, const std::string& key) {
  // parses "key = value" report lines
  const auto pos = text.find(key + " = ");
  REQUIRE(pos != std::string::npos);
  return std::strtod(text.c_str() + pos + key.size() + 3, nullptr);
}

}  // namespace

TEST_CASE("critical-length reports the Brownian example") {
  const CliResult result = run_cli(
      "critical-length --model brownian --v 1 --D 1 --r 1 --lambda0 2 "
      "--lambda1 1");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("verdict: CriticalLength") != std::string::npos);
  const double want = std::log(2.0) / (std::sqrt(3.0) - 1.0);
  CHECK(std::abs(field_value(result.out, "L_c") - want) <= 1e-9);
  CHECK(std::abs(field_value(result.out, "asymptotic") - std::log(2.0)) <=
        1e-12);
  CHECK(field_value(result.out, "round-trip residual") <= 1e-10);
}

TEST_CASE("critical-length spots the always-persists regime") {
  const CliResult result = run_cli(
      "critical-length --model brownian --v 1 --D 1 --r 2 --lambda0 1 "
      "--lambda1 1");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("AlwaysPersists") != std::string::npos);
}

TEST_CASE("invalid regime input exits 2 and names the invariant") {
  const CliResult result = run_cli("critical-length --lambda1 -1");
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("settlingRate > 0") != std::string::npos);
}

TEST_CASE("unknown flags and bad families exit 2, help exits 0") {
  CHECK(run_cli("critical-length --no-such-flag").exit_code == 2);
  CHECK(run_cli("critical-length --model levy-flight").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("simulate --help").exit_code == 0);
}

TEST_CASE("curve emits the exact four-column header") {
  const CliResult result = run_cli("curve --grid 0.5,1,2,4,8");
  CHECK(result.exit_code == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "v,L_c,L_c_asymptotic,ratio");
  double prev = 0.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = fields_of(lines[i]);
    REQUIRE(fields.size() == 4);
    const double lc = std::strtod(fields[1].c_str(), nullptr);
    CHECK(lc > prev);
    prev = lc;
  }
}

TEST_CASE("curve with zero diffusion pins the ratio at one") {
  const CliResult result =
      run_cli("curve --model brownian --D 0 --grid 1,2,4");
  CHECK(result.exit_code == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 4);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = fields_of(lines[i]);
    REQUIRE(fields.size() == 4);
    CHECK(fields[3] == "1");
  }
}

TEST_CASE("curve json mirrors the csv columns") {
  const CliResult result = run_cli("curve --grid 0.5,1,2,4,8 --format json");
  CHECK(result.exit_code == 0);
  const nlohmann::json parsed = nlohmann::json::parse(result.out);
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 5);
  for (const auto& row : parsed) {
    CHECK(row.contains("v"));
    CHECK(row.contains("L_c"));
    CHECK(row.contains("L_c_asymptotic"));
    CHECK(row.contains("ratio"));
  }
}

TEST_CASE("seeded population runs are byte-identical") {
  const std::string args =
      "simulate population --L 0.5 --replicates 20 --seed 7 --horizon 200";
  const CliResult first = run_cli(args);
  const CliResult second = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(second.exit_code == 0);
  CHECK(first.out == second.out);

  const auto lines = lines_of(first.out);
  REQUIRE(lines.size() == 21);
  CHECK(lines[0] == "replicate,extinct,extinctionTime");
  const auto fields = fields_of(lines[1]);
  REQUIRE(fields.size() == 3);
  CHECK(fields[0] == "0");
}

TEST_CASE("population trajectories start from the initial census") {
  const CliResult result = run_cli(
      "simulate population --L 0.5 --initial 5 --trajectory --seed 3 "
      "--horizon 100");
  CHECK(result.exit_code == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "time,benthic,mobile");
  CHECK(lines[1] == "0,5,0");
}

TEST_CASE("washout summary carries estimate, error, analytic, z") {
  const CliResult result =
      run_cli("simulate washout --L 1 --paths 2000 --seed 3");
  CHECK(result.exit_code == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "estimate,stdError,analytic,z");
  const auto fields = fields_of(lines[1]);
  REQUIRE(fields.size() == 4);
  const double estimate = std::strtod(fields[0].c_str(), nullptr);
  const double z = std::strtod(fields[3].c_str(), nullptr);
  CHECK(estimate > 0.0);
  CHECK(estimate < 1.0);
  CHECK(z < 6.0);
}

TEST_CASE("the seed env var sets the default seed") {
  const std::string args = "simulate washout --L 1 --paths 2000";
  const CliResult via_env = run_cli(args, "BENTHOS_SEED=99 ");
  const CliResult via_flag = run_cli(args + " --seed 99");
  CHECK(via_env.out == via_flag.out);
  // the flag still wins over the environment
  const CliResult overridden = run_cli(args + " --seed 7", "BENTHOS_SEED=99 ");
  const CliResult direct = run_cli(args + " --seed 7");
  CHECK(overridden.out == direct.out);
  CHECK(run_cli(args, "BENTHOS_SEED=banana ").exit_code == 2);
}

TEST_CASE("thread count never changes seeded output") {
  const std::string args =
      "simulate washout --model exponential-jumps --v 2 --D 0.5 "
      "--jump-rate 1 --jump-mean 0.5 --L 1 --paths 2000 --seed 5";
  const CliResult one = run_cli(args + " --threads 1");
  const CliResult four = run_cli(args + " --threads 4");
  CHECK(one.exit_code == 0);
  CHECK(one.out == four.out);
}

TEST_CASE("config files feed defaults and flags override them") {
  const std::string config_path = temp_path("conf");
  {
    std::ofstream config(config_path);
    config << "[model]\nfamily = brownian\nv = 2\nD = 1\n"
           << "[regime]\nr = 1\nlambda0 = 2\nlambda1 = 1\n";
  }

  const CliResult from_config =
      run_cli("critical-length --config " + config_path);
  CHECK(from_config.exit_code == 0);
  // closed form at v=2, D=1: ln 2 / Phi(1), Phi(1) = (sqrt(6) - 2)
  const double phi = std::sqrt(6.0) - 2.0;
  CHECK(std::abs(field_value(from_config.out, "L_c") - std::log(2.0) / phi) <=
        1e-9);

  const CliResult overridden =
      run_cli("critical-length --config " + config_path + " --v 1");
  const double want = std::log(2.0) / (std::sqrt(3.0) - 1.0);
  CHECK(std::abs(field_value(overridden.out, "L_c") - want) <= 1e-9);

  const CliResult missing = run_cli("critical-length --config /no/such/file");
  CHECK(missing.exit_code == 2);

  std::remove(config_path.c_str());
}

TEST_CASE("clone-check emits one row per requested time") {
  const CliResult result = run_cli(
      "simulate clone-check --f gaussian --t 0.5,1 --paths 2000 --v -0.5 "
      "--r 0.7 --seed 9");
  CHECK(result.exit_code == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] ==
        "f,t,mcMean,mcStdError,analytic,martingaleGap,"
        "martingaleGapStdError,n");
  CHECK(fields_of(lines[1])[0] == "gaussian");
  CHECK(fields_of(lines[1])[1] == "0.5");
  CHECK(fields_of(lines[2])[1] == "1");

  CHECK(run_cli("simulate clone-check --f cubic --t 1").exit_code == 2);
}

TEST_CASE("bbm summary reports a sane survival fraction") {
  const CliResult result = run_cli(
      "simulate bbm --v -1.5 --D 1 --r 0.5 --x0 1 --replicates 50 "
      "--horizon 30 --seed 11");
  CHECK(result.exit_code == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "survival,stdError,replicates,capped");
  const double survival =
      std::strtod(fields_of(lines[1])[0].c_str(), nullptr);
  CHECK(survival >= 0.0);
  CHECK(survival <= 1.0);
}

TEST_CASE("validate rejects corrupted models before running") {
  const CliResult result = run_cli("validate --v -1");
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("effective velocity") != std::string::npos);
}

TEST_CASE("the full validation suite passes at the default sample size") {
  const CliResult result = run_cli("validate --threads 4");
  CHECK(result.exit_code == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "check,rule,analytic,estimate,stdError,passed");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = fields_of(lines[i]);
    REQUIRE(fields.size() == 6);
    CHECK(fields[5] == "1");
  }
  CHECK(result.err.find("checks passed") != std::string::npos);
}

TEST_CASE("a smaller sample keeps the same rule but wider error bars") {
  const CliResult small = run_cli("validate --paths 100 --seed 21");
  // the 4 se rule is applied regardless of n; with n = 100 the bars are wide
  const auto lines = lines_of(small.out);
  REQUIRE(lines.size() >= 2);
  double first_se = -1.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = fields_of(lines[i]);
    REQUIRE(fields.size() == 6);
    if (fields[0].rfind("washout", 0) == 0 && first_se < 0.0) {
      first_se = std::strtod(fields[4].c_str(), nullptr);
    }
  }
  CHECK(first_se > 1e-3);  // an order wider than the n = 1e5 bars
}

TEST_CASE("output lands in a file when requested") {
  const std::string out_path = temp_path("csv");
  const CliResult result =
      run_cli("curve --grid 1,2 --output " + out_path);
  CHECK(result.exit_code == 0);
  CHECK(result.out.empty());
  const std::string written = read_file(out_path);
  CHECK(lines_of(written).size() == 3);
  std::remove(out_path.c_str());
}
