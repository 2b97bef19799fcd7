#pragma once
// Scenario layer: JSON experiment configs, the six scenario drivers, and the
// manifest/summary plumbing.  Every run writes a manifest.json containing a
// normalized echo of its config (re-parsing that echo gives the same config),
// a stable hash of that echo, and the scenario results.  All artifact writes
// go through atomic temp-and-rename.  wall_seconds fields are written as 0
// so identical configs give byte-identical outputs; real timings go to
// stderr in verbose mode.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "relaxlab/diagnostics.hpp"
#include "relaxlab/initial_data.hpp"
#include "relaxlab/model.hpp"
#include "relaxlab/spectral.hpp"

namespace relaxlab {

using Json = nlohmann::ordered_json;

// config rejection; key_path names the offending key ("params.lambda") or
// the input position for syntax errors
struct ConfigError : std::runtime_error {
  std::string key_path;
  ConfigError(std::string path, const std::string& msg)
      : std::runtime_error(path.empty() ? msg : msg + " (at " + path + ")"),
        key_path(std::move(path)) {}
};

// a blow-up or solver failure inside a regime the theory guarantees; the CLI
// maps this to its own exit code so CI can alarm on it
struct GuaranteedRegimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataConfig {
  DataKind kind = DataKind::WellPrepared;
  double amplitude = 0.05;
  double q = 0.5;
};

struct IntegratorConfig {
  DtPolicy policy{};
  double T = 10.0;
  int snapshots = 200;
  double rtol = 1e-10, atol = 1e-12;
};

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
};

struct LatticePoint {
  double lambda = 1.0, mu = 1.0;
};

struct GapCheck {
  double lambda = 0.0;
  std::optional<double> max_gap, min_gap;
};

struct ScenarioConfig {
  std::string scenario;
  PhysParams params;               // epsilon = eps_list.front()
  std::vector<double> eps_list{1.0};
  Grid grid{1, 256, 50.26548245743669};
  DataConfig data;
  IntegratorConfig integrator;
  OutputConfig outputs;
  uint64_t seed = 0;
  int k0 = kDefaultK0;
  int workers = 1;

  // spectral-selftest
  int trials = 50;
  // linear-oracle (lambdas shared with diffusion-phenomenon)
  std::vector<double> oracle_epsilons;
  double oracle_tolerance = 1e-10;
  bool dt_study = false;
  // diffusion-phenomenon
  std::vector<double> lambdas;
  double t_eval = 50.0;
  double width = 16.0;
  std::string ndot0 = "darcy";  // or "zero"
  std::vector<GapCheck> gap_checks;
  // relaxation-sweep
  std::optional<std::pair<double, double>> assert_slope_in;
  // stability-probe
  std::vector<LatticePoint> lattice;
  // besov-report
  std::vector<double> s_values;
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config(const Json& j);
ScenarioConfig load_config_file(const std::string& path);

// normalized echo; parse_config(config_to_json(c)) reproduces c
Json config_to_json(const ScenarioConfig& c);
std::string config_hash(const ScenarioConfig& c);

// One member of the eps sweep: Euler and the porous-medium limit advanced on
// a shared clock, error/energy accumulated every step.
struct PairedRunResult {
  double epsilon = 0.0;
  bool completed = false;
  std::string trigger;  // blow-up trigger name when !completed
  double t_end = 0.0;
  ErrorReport error;
  EnergyReport energy;
  double mass_drift_euler = 0.0;
  double mass_drift_pm = 0.0;
  double rho_gap = 0.0;
  long steps = 0;
};

PairedRunResult run_relaxation_pair(const ScenarioConfig& cfg, double epsilon);

struct ScenarioResult {
  bool pass = true;
  bool guaranteed_failure = false;
  int exit_code = 0;  // 0 pass, 1 assertion failed, 3 guaranteed-regime failure
  Json manifest;
  std::vector<std::string> files_written;
};

// dispatch + artifact persistence; throws ConfigError on invalid configs
ScenarioResult run_scenario(const ScenarioConfig& cfg, bool verbose = false);

// aggregate every manifest.json under dir (recursively) into summary.json;
// throws ConfigError when none are found
Json summarize_results(const std::string& dir);

}  // namespace relaxlab
