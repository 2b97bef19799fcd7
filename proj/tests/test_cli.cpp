#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "relaxlab/scenario.hpp"

using namespace relaxlab;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(RELAXLAB_BIN) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  CliResult r;
  char buf[4096];
  size_t m;
  while ((m = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, m);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path fresh_dir(const std::string& leaf) {
  fs::path d = fs::temp_directory_path() / "relaxlab_cli_tests" / leaf;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
  REQUIRE(out.good());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string selftest_config(const fs::path& out_dir) {
  return std::string(R"({
    "scenario": "spectral-selftest",
    "trials": 5,
    "grid": {"dim": 1, "n": 64, "length": 50.26548245743669},
    "outputs": {"directory": ")") +
         out_dir.string() + R"("}
  })";
}

std::string diffusion_config(const fs::path& out_dir, bool impossible_check) {
  std::string checks = impossible_check
                           ? R"("gap_checks": [{"lambda": 0.5, "max_gap": 1e-30}],)"
                           : "";
  return std::string(R"({
    "scenario": "diffusion-phenomenon",
    "lambdas": [0.5],
    "t_eval": 5.0,
    "width": 2.0,
    "ndot0": "darcy",
    )") +
         checks + R"(
    "params": {"mu": 1.0, "lambda": 0.5},
    "grid": {"dim": 1, "n": 64, "length": 50.26548245743669},
    "integrator": {"snapshots": 11},
    "outputs": {"directory": ")" +
         out_dir.string() + R"("}
  })";
}

// key path carried by the rejection, or "" when the text parses
std::string rejected_key(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key_path;
  }
  return "";
}

}  // namespace

TEST_CASE("config parsing, normalization, and hashing") {
  const std::string text = R"({
    "scenario": "relaxation-sweep",
    "seed": 7,
    "params": {"epsilon": [0.2, 0.1, 0.05], "lambda": 0.5, "mu": 1.0},
    "grid": {"dim": 1, "n": 128, "length": 50.26548245743669},
    "data": {"kind": "gap-controlled", "amplitude": 0.05, "q": 0.5},
    "integrator": {"dt_policy": "fixed-steps", "steps": 40, "T": 2.0,
                   "snapshots": 21},
    "assert_slope_in": [0.4, 0.6],
    "workers": 2,
    "outputs": {"directory": "unused", "formats": ["json"]}
  })";
  ScenarioConfig c = parse_config_text(text);
  CHECK(c.scenario == "relaxation-sweep");
  CHECK(c.eps_list.size() == 3);
  CHECK(c.params.epsilon == 0.2);  // first sweep member
  CHECK(c.data.kind == DataKind::GapControlled);
  CHECK(c.integrator.policy.kind == DtPolicy::Kind::FixedSteps);
  REQUIRE(c.assert_slope_in.has_value());
  CHECK(c.assert_slope_in->first == 0.4);
  CHECK(c.outputs.json);
  CHECK_FALSE(c.outputs.csv);

  // the normalized echo is a fixed point of parse -> echo
  Json echo = config_to_json(c);
  ScenarioConfig c2 = parse_config(echo);
  CHECK(config_to_json(c2) == echo);
  CHECK(config_hash(c2) == config_hash(c));
  REQUIRE(c2.assert_slope_in.has_value());
  CHECK(c2.assert_slope_in->second == 0.6);

  ScenarioConfig c3 = c;
  c3.data.amplitude = 0.06;
  CHECK(config_hash(c3) != config_hash(c));
}

TEST_CASE("config rejections name the offending key") {
  CHECK(rejected_key(R"({"scenario": "spectral-selftest",
                         "data": {"amplitud": 0.1}})") == "data.amplitud");
  CHECK(rejected_key("{ scenario: nope").substr(0, 5) == "line ");
  CHECK(rejected_key(R"({"scenario": "relaxation-sweep",
                         "params": {"epsilon": [0.2, 0.1]}})") ==
        "params.epsilon");
  CHECK(rejected_key(R"({"scenario": "besov-report", "s_values": [0.5],
                         "integrator": {"dt_policy": "fixed-dt", "dt": 0.1,
                                        "steps": 5}})") == "integrator.steps");
  CHECK(rejected_key(R"({"scenario": "besov-report", "s_values": [0.5],
                         "params": {"dim": 1},
                         "grid": {"dim": 2, "n": 32, "length": 6.0}})") ==
        "grid.dim");
  CHECK(rejected_key(R"({"scenario": "besov-report", "s_values": [0.5],
                         "params": {"epsilon": [0.5, 1.5]}})") ==
        "params.epsilon[1]");
  CHECK(rejected_key(R"({"scenario": "quantum-leap"})") == "scenario");
  CHECK(rejected_key(R"({"scenario": "stability-probe"})") == "lattice");
}

TEST_CASE("cli exit codes") {
  fs::path base = fresh_dir("exit_codes");

  fs::path ok_cfg = base / "selftest.json";
  write_text(ok_cfg, selftest_config(base / "out_ok"));
  CliResult ok = run_cli("spectral-selftest --config " + ok_cfg.string());
  CHECK(ok.code == 0);
  CHECK(ok.out.find("pass") != std::string::npos);
  CHECK(fs::exists(base / "out_ok" / "manifest.json"));

  CliResult missing =
      run_cli("spectral-selftest --config " + (base / "nope.json").string());
  CHECK(missing.code == 2);

  fs::path bad_cfg = base / "bad.json";
  write_text(bad_cfg, "{ not json");
  CHECK(run_cli("spectral-selftest --config " + bad_cfg.string()).code == 2);

  fs::path typo_cfg = base / "typo.json";
  write_text(typo_cfg, R"({"scenario": "spectral-selftest",
                           "data": {"amplitud": 0.1}})");
  CliResult typo = run_cli("spectral-selftest --config " + typo_cfg.string());
  CHECK(typo.code == 2);
  CHECK(typo.out.find("data.amplitud") != std::string::npos);

  CliResult mismatch = run_cli("linear-oracle --config " + ok_cfg.string());
  CHECK(mismatch.code == 2);
  CHECK(mismatch.out.find("spectral-selftest") != std::string::npos);

  fs::path fail_cfg = base / "diffusion_fail.json";
  write_text(fail_cfg, diffusion_config(base / "out_fail", true));
  CliResult fail = run_cli("diffusion-phenomenon --config " + fail_cfg.string());
  CHECK(fail.code == 1);
  CHECK(fail.out.find("FAIL") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical artifacts") {
  fs::path base = fresh_dir("determinism");
  fs::path cfg = base / "diffusion.json";
  fs::path out = base / "out";
  write_text(cfg, diffusion_config(out, false));

  CHECK(run_cli("diffusion-phenomenon --config " + cfg.string()).code == 0);
  const std::string manifest1 = slurp(out / "manifest.json");
  const std::string gaps1 = slurp(out / "gaps.csv");

  CHECK(run_cli("diffusion-phenomenon --config " + cfg.string()).code == 0);
  CHECK(slurp(out / "manifest.json") == manifest1);
  CHECK(slurp(out / "gaps.csv") == gaps1);
}

TEST_CASE("summarize aggregates manifests") {
  fs::path base = fresh_dir("summarize");

  CHECK(run_cli("summarize " + (base / "empty").string()).code == 2);
  fs::create_directories(base / "empty");
  CHECK(run_cli("summarize " + (base / "empty").string()).code == 2);

  fs::path cfg = base / "selftest.json";
  write_text(cfg, selftest_config(base / "pass_tree" / "run1"));
  REQUIRE(run_cli("spectral-selftest --config " + cfg.string()).code == 0);
  CliResult good = run_cli("summarize " + (base / "pass_tree").string());
  CHECK(good.code == 0);
  CHECK(good.out.find("1 pass, 0 fail") != std::string::npos);
  CHECK(fs::exists(base / "pass_tree" / "summary.json"));

  fs::path fail_cfg = base / "diffusion_fail.json";
  write_text(fail_cfg, diffusion_config(base / "fail_tree" / "run1", true));
  REQUIRE(run_cli("diffusion-phenomenon --config " + fail_cfg.string()).code == 1);
  CliResult mixed = run_cli("summarize " + (base / "fail_tree").string());
  CHECK(mixed.code == 1);
  CHECK(mixed.out.find("1 fail") != std::string::npos);
}
