// Scenario front end.  One subcommand per scenario plus `summarize`; the
// subcommand must agree with the "scenario" field of the config it loads.
// Exit codes: 0 pass, 1 assertion failure, 2 config error, 3 runtime error
// or blow-up inside a guaranteed regime.

#include <climits>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relaxlab/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for damped compressible Euler and its "
               "porous-medium relaxation limit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, results_dir;
  int workers = 0;
  int k0_override = INT_MIN;
  bool verbose = false;

  const std::vector<std::pair<std::string, std::string>> scenarios = {
      {"spectral-selftest", "partition/Bernstein/orthogonality suites"},
      {"linear-oracle", "split-step vs per-mode propagation, dt-order study"},
      {"diffusion-phenomenon", "damped wave vs time-dependent heat flow gaps"},
      {"relaxation-sweep", "Euler vs porous-medium error norms over an eps sweep"},
      {"stability-probe", "(lambda, mu) lattice with blow-up monitoring"},
      {"besov-report", "dyadic block and Besov norm tables for initial data"},
  };
  for (const auto& [name, desc] : scenarios) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->add_option("--config", config_path, "JSON config file")->required();
    s->add_option("--out", out_dir, "override outputs.directory");
    s->add_option("--workers", workers, "max concurrent sweep members");
    s->add_option("--k0", k0_override, "override the band-threshold offset");
    s->add_flag("--verbose", verbose, "print timings to stderr");
  }
  CLI::App* sum = app.add_subcommand("summarize", "aggregate manifest.json files");
  sum->add_option("dir", results_dir, "results directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sum->parsed()) {
      const relaxlab::Json s = relaxlab::summarize_results(results_dir);
      std::printf("summarized %d manifests: %d pass, %d fail -> %s/summary.json\n",
                  s["manifests"].get<int>(), s["pass"].get<int>(),
                  s["fail"].get<int>(), results_dir.c_str());
      return s["fail"].get<int>() > 0 ? 1 : 0;
    }

    relaxlab::ScenarioConfig cfg = relaxlab::load_config_file(config_path);
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub != cfg.scenario)
      throw relaxlab::ConfigError(
          "scenario", "config is for '" + cfg.scenario +
                          "' but the subcommand is '" + sub + "'");
    if (!out_dir.empty()) cfg.outputs.directory = out_dir;
    if (workers > 0) cfg.workers = workers;
    if (k0_override != INT_MIN) cfg.k0 = k0_override;

    const relaxlab::ScenarioResult r = relaxlab::run_scenario(cfg, verbose);
    std::printf("%s: %s (exit %d), results in %s\n", cfg.scenario.c_str(),
                r.pass ? "pass" : "FAIL", r.exit_code,
                cfg.outputs.directory.c_str());
    return r.exit_code;
  } catch (const relaxlab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const relaxlab::GuaranteedRegimeFailure& e) {
    std::fprintf(stderr, "guaranteed-regime failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
