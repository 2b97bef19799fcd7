#include "relaxlab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "relaxlab/io_util.hpp"
#include "relaxlab/lemma_checks.hpp"
#include "relaxlab/linear_lab.hpp"

namespace relaxlab {

namespace fs = std::filesystem;
using cd = std::complex<double>;

// ---------------------------------------------------------------------------
// config parsing

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path, msg);
}

std::string joinp(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void check_keys(const Json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(joinp(path, it.key()), "unknown key");
  }
}

const Json* find(const Json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_num(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

double get_num(const Json& obj, const std::string& path, const std::string& key,
               double def) {
  const Json* v = find(obj, key);
  return v ? as_num(*v, joinp(path, key)) : def;
}

double req_num(const Json& obj, const std::string& path, const std::string& key) {
  const Json* v = find(obj, key);
  if (!v) fail(joinp(path, key), "required key missing");
  return as_num(*v, joinp(path, key));
}

long get_int(const Json& obj, const std::string& path, const std::string& key,
             long def) {
  const Json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_number_integer() && !v->is_number_unsigned())
    fail(joinp(path, key), "expected an integer");
  return v->get<long>();
}

bool get_bool(const Json& obj, const std::string& path, const std::string& key,
              bool def) {
  const Json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_boolean()) fail(joinp(path, key), "expected a boolean");
  return v->get<bool>();
}

std::string get_str(const Json& obj, const std::string& path,
                    const std::string& key, const std::string& def) {
  const Json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_string()) fail(joinp(path, key), "expected a string");
  return v->get<std::string>();
}

std::vector<double> num_list(const Json& v, const std::string& path) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
    return out;
  }
  if (!v.is_array() || v.empty()) fail(path, "expected a number or nonempty array");
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(as_num(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

const std::vector<std::string> kScenarios = {
    "spectral-selftest",   "linear-oracle",   "diffusion-phenomenon",
    "relaxation-sweep",    "stability-probe", "besov-report"};

}  // namespace

ScenarioConfig parse_config(const Json& j) {
  if (!j.is_object()) fail("", "config must be a JSON object");
  ScenarioConfig c;

  const Json* sc = find(j, "scenario");
  if (!sc || !sc->is_string()) fail("scenario", "required string missing");
  c.scenario = sc->get<std::string>();
  if (std::find(kScenarios.begin(), kScenarios.end(), c.scenario) ==
      kScenarios.end())
    fail("scenario", "unknown scenario '" + c.scenario + "'");

  std::vector<const char*> allowed = {"scenario", "seed",    "params",
                                      "grid",     "data",    "integrator",
                                      "outputs",  "k0",      "workers"};
  auto allow = [&](std::initializer_list<const char*> more) {
    for (const char* k : more) allowed.push_back(k);
  };
  if (c.scenario == "spectral-selftest") allow({"trials"});
  if (c.scenario == "linear-oracle")
    allow({"lambdas", "epsilons", "tolerance", "dt_study"});
  if (c.scenario == "diffusion-phenomenon")
    allow({"lambdas", "t_eval", "width", "ndot0", "gap_checks"});
  if (c.scenario == "relaxation-sweep") allow({"assert_slope_in"});
  if (c.scenario == "stability-probe") allow({"lattice"});
  if (c.scenario == "besov-report") allow({"s_values"});
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) fail(it.key(), "unknown key");
  }

  {
    const Json* v = find(j, "seed");
    if (v) {
      if (!v->is_number_integer() && !v->is_number_unsigned())
        fail("seed", "expected an integer");
      if (v->is_number_integer() && v->get<long long>() < 0)
        fail("seed", "must be nonnegative");
      c.seed = v->get<uint64_t>();
    }
  }
  c.k0 = static_cast<int>(get_int(j, "", "k0", kDefaultK0));
  c.workers = static_cast<int>(get_int(j, "", "workers", 1));
  if (c.workers < 1) fail("workers", "must be >= 1");

  if (const Json* pj = find(j, "params")) {
    if (!pj->is_object()) fail("params", "expected an object");
    check_keys(*pj, "params",
               {"epsilon", "mu", "lambda", "rho_bar", "gamma", "A", "dim"});
    if (const Json* e = find(*pj, "epsilon"))
      c.eps_list = num_list(*e, "params.epsilon");
    c.params.mu = get_num(*pj, "params", "mu", c.params.mu);
    c.params.lambda = get_num(*pj, "params", "lambda", c.params.lambda);
    c.params.rho_bar = get_num(*pj, "params", "rho_bar", c.params.rho_bar);
    c.params.gamma = get_num(*pj, "params", "gamma", c.params.gamma);
    c.params.A = get_num(*pj, "params", "A", c.params.A);
    c.params.dim = static_cast<int>(get_int(*pj, "params", "dim", c.params.dim));
  }
  c.params.epsilon = c.eps_list.front();

  if (const Json* gj = find(j, "grid")) {
    if (!gj->is_object()) fail("grid", "expected an object");
    check_keys(*gj, "grid", {"dim", "n", "length"});
    const int dim = static_cast<int>(get_int(*gj, "grid", "dim", c.params.dim));
    const int n = static_cast<int>(get_int(*gj, "grid", "n", 256));
    const double len = req_num(*gj, "grid", "length");
    try {
      c.grid = Grid(dim, n, len);
    } catch (const std::exception& e) {
      fail("grid", e.what());
    }
  }
  if (c.grid.dim != c.params.dim)
    fail("grid.dim", "must match params.dim");

  if (const Json* dj = find(j, "data")) {
    if (!dj->is_object()) fail("data", "expected an object");
    check_keys(*dj, "data", {"kind", "amplitude", "q"});
    const std::string kind = get_str(*dj, "data", "kind", "well-prepared");
    try {
      c.data.kind = data_kind_from_string(kind);
    } catch (const std::exception& e) {
      fail("data.kind", e.what());
    }
    c.data.amplitude = get_num(*dj, "data", "amplitude", c.data.amplitude);
    if (!(c.data.amplitude > 0)) fail("data.amplitude", "must be > 0");
    c.data.q = get_num(*dj, "data", "q", c.data.q);
    if (!(c.data.q > 0)) fail("data.q", "must be > 0");
  }

  if (const Json* ij = find(j, "integrator")) {
    if (!ij->is_object()) fail("integrator", "expected an object");
    check_keys(*ij, "integrator",
               {"dt_policy", "dt", "steps", "T", "snapshots", "rtol", "atol"});
    const std::string pol = get_str(*ij, "integrator", "dt_policy", "auto");
    if (pol == "auto") {
      c.integrator.policy = DtPolicy::automatic();
      if (find(*ij, "dt") || find(*ij, "steps"))
        fail("integrator", "dt/steps only valid for fixed policies");
    } else if (pol == "fixed-dt") {
      const double dt = req_num(*ij, "integrator", "dt");
      if (!(dt > 0)) fail("integrator.dt", "must be > 0");
      c.integrator.policy = DtPolicy::fixed_dt(dt);
      if (find(*ij, "steps")) fail("integrator.steps", "not valid for fixed-dt");
    } else if (pol == "fixed-steps") {
      const long n = get_int(*ij, "integrator", "steps", 0);
      if (n < 1) fail("integrator.steps", "must be >= 1");
      c.integrator.policy = DtPolicy::fixed_steps(n);
      if (find(*ij, "dt")) fail("integrator.dt", "not valid for fixed-steps");
    } else {
      fail("integrator.dt_policy", "expected auto | fixed-dt | fixed-steps");
    }
    c.integrator.T = get_num(*ij, "integrator", "T", c.integrator.T);
    if (!(c.integrator.T > 0)) fail("integrator.T", "must be > 0");
    c.integrator.snapshots =
        static_cast<int>(get_int(*ij, "integrator", "snapshots", 200));
    if (c.integrator.snapshots < 2) fail("integrator.snapshots", "must be >= 2");
    c.integrator.rtol = get_num(*ij, "integrator", "rtol", c.integrator.rtol);
    c.integrator.atol = get_num(*ij, "integrator", "atol", c.integrator.atol);
    if (!(c.integrator.rtol > 0) || !(c.integrator.atol > 0))
      fail("integrator.rtol", "tolerances must be > 0");
  }

  if (const Json* oj = find(j, "outputs")) {
    if (!oj->is_object()) fail("outputs", "expected an object");
    check_keys(*oj, "outputs", {"directory", "formats"});
    c.outputs.directory = get_str(*oj, "outputs", "directory", "out");
    if (c.outputs.directory.empty()) fail("outputs.directory", "must be nonempty");
    if (const Json* f = find(*oj, "formats")) {
      if (!f->is_array()) fail("outputs.formats", "expected an array");
      c.outputs.csv = c.outputs.json = false;
      for (const auto& e : *f) {
        if (!e.is_string()) fail("outputs.formats", "expected strings");
        const std::string s = e.get<std::string>();
        if (s == "csv")
          c.outputs.csv = true;
        else if (s == "json")
          c.outputs.json = true;
        else
          fail("outputs.formats", "unknown format '" + s + "'");
      }
    }
  }

  // scenario-specific sections
  if (c.scenario == "spectral-selftest") {
    c.trials = static_cast<int>(get_int(j, "", "trials", 50));
    if (c.trials < 1) fail("trials", "must be >= 1");
  }
  if (c.scenario == "linear-oracle" || c.scenario == "diffusion-phenomenon") {
    const Json* l = find(j, "lambdas");
    if (!l) fail("lambdas", "required for " + c.scenario);
    c.lambdas = num_list(*l, "lambdas");
  }
  if (c.scenario == "linear-oracle") {
    const Json* e = find(j, "epsilons");
    if (!e) fail("epsilons", "required for linear-oracle");
    c.oracle_epsilons = num_list(*e, "epsilons");
    c.oracle_tolerance = get_num(j, "", "tolerance", c.oracle_tolerance);
    if (!(c.oracle_tolerance > 0)) fail("tolerance", "must be > 0");
    c.dt_study = get_bool(j, "", "dt_study", false);
  }
  if (c.scenario == "diffusion-phenomenon") {
    c.t_eval = get_num(j, "", "t_eval", c.t_eval);
    if (!(c.t_eval > 0)) fail("t_eval", "must be > 0");
    c.width = get_num(j, "", "width", c.width);
    if (!(c.width > 0)) fail("width", "must be > 0");
    c.ndot0 = get_str(j, "", "ndot0", c.ndot0);
    if (c.ndot0 != "darcy" && c.ndot0 != "zero")
      fail("ndot0", "expected darcy | zero");
    if (const Json* gc = find(j, "gap_checks")) {
      if (!gc->is_array()) fail("gap_checks", "expected an array");
      for (size_t i = 0; i < gc->size(); ++i) {
        const std::string path = "gap_checks[" + std::to_string(i) + "]";
        const Json& e = (*gc)[i];
        if (!e.is_object()) fail(path, "expected an object");
        check_keys(e, path, {"lambda", "max_gap", "min_gap"});
        GapCheck g;
        g.lambda = req_num(e, path, "lambda");
        if (find(e, "max_gap")) g.max_gap = req_num(e, path, "max_gap");
        if (find(e, "min_gap")) g.min_gap = req_num(e, path, "min_gap");
        bool known = false;
        for (double l : c.lambdas)
          if (std::abs(l - g.lambda) < 1e-12) known = true;
        if (!known) fail(path + ".lambda", "not in the lambdas list");
        c.gap_checks.push_back(g);
      }
    }
  }
  if (c.scenario == "relaxation-sweep") {
    if (c.eps_list.size() < 3)
      fail("params.epsilon", "sweep needs at least 3 epsilon values");
    if (const Json* a = find(j, "assert_slope_in")) {
      if (!a->is_array() || a->size() != 2)
        fail("assert_slope_in", "expected [lo, hi]");
      const double lo = as_num((*a)[0], "assert_slope_in[0]");
      const double hi = as_num((*a)[1], "assert_slope_in[1]");
      if (!(lo < hi)) fail("assert_slope_in", "lo must be < hi");
      c.assert_slope_in = {lo, hi};
    }
  }
  if (c.scenario == "stability-probe") {
    const Json* lt = find(j, "lattice");
    if (!lt || !lt->is_array() || lt->empty())
      fail("lattice", "required nonempty array for stability-probe");
    for (size_t i = 0; i < lt->size(); ++i) {
      const std::string path = "lattice[" + std::to_string(i) + "]";
      const Json& e = (*lt)[i];
      if (!e.is_object()) fail(path, "expected an object");
      check_keys(e, path, {"lambda", "mu"});
      LatticePoint pt;
      pt.lambda = req_num(e, path, "lambda");
      pt.mu = req_num(e, path, "mu");
      c.lattice.push_back(pt);
    }
  }
  if (c.scenario == "besov-report") {
    const Json* sv = find(j, "s_values");
    if (!sv) fail("s_values", "required for besov-report");
    c.s_values = num_list(*sv, "s_values");
  }

  for (size_t i = 0; i < c.eps_list.size(); ++i)
    if (!(c.eps_list[i] > 0 && c.eps_list[i] <= 1))
      fail("params.epsilon[" + std::to_string(i) + "]", "must lie in (0, 1]");

  return c;
}

ScenarioConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    size_t line = 1;
    const size_t stop = std::min(text.size(), e.byte);
    for (size_t i = 0; i < stop; ++i)
      if (text[i] == '\n') ++line;
    fail("line " + std::to_string(line), e.what());
  }
  return parse_config(j);
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

Json config_to_json(const ScenarioConfig& c) {
  Json j;
  j["scenario"] = c.scenario;
  j["seed"] = c.seed;
  Json pj;
  if (c.eps_list.size() == 1)
    pj["epsilon"] = c.eps_list.front();
  else
    pj["epsilon"] = c.eps_list;
  pj["mu"] = c.params.mu;
  pj["lambda"] = c.params.lambda;
  pj["rho_bar"] = c.params.rho_bar;
  pj["gamma"] = c.params.gamma;
  pj["A"] = c.params.A;
  pj["dim"] = c.params.dim;
  j["params"] = pj;
  j["grid"] = Json{{"dim", c.grid.dim}, {"n", c.grid.n}, {"length", c.grid.length}};
  j["data"] = Json{{"kind", to_string(c.data.kind)},
                   {"amplitude", c.data.amplitude},
                   {"q", c.data.q}};
  Json ij;
  switch (c.integrator.policy.kind) {
    case DtPolicy::Kind::Auto:
      ij["dt_policy"] = "auto";
      break;
    case DtPolicy::Kind::FixedDt:
      ij["dt_policy"] = "fixed-dt";
      ij["dt"] = c.integrator.policy.dt;
      break;
    case DtPolicy::Kind::FixedSteps:
      ij["dt_policy"] = "fixed-steps";
      ij["steps"] = c.integrator.policy.steps;
      break;
  }
  ij["T"] = c.integrator.T;
  ij["snapshots"] = c.integrator.snapshots;
  ij["rtol"] = c.integrator.rtol;
  ij["atol"] = c.integrator.atol;
  j["integrator"] = ij;
  Json fm = Json::array();
  if (c.outputs.csv) fm.push_back("csv");
  if (c.outputs.json) fm.push_back("json");
  j["outputs"] = Json{{"directory", c.outputs.directory}, {"formats", fm}};
  j["k0"] = c.k0;
  j["workers"] = c.workers;

  if (c.scenario == "spectral-selftest") j["trials"] = c.trials;
  if (c.scenario == "linear-oracle") {
    j["lambdas"] = c.lambdas;
    j["epsilons"] = c.oracle_epsilons;
    j["tolerance"] = c.oracle_tolerance;
    j["dt_study"] = c.dt_study;
  }
  if (c.scenario == "diffusion-phenomenon") {
    j["lambdas"] = c.lambdas;
    j["t_eval"] = c.t_eval;
    j["width"] = c.width;
    j["ndot0"] = c.ndot0;
    if (!c.gap_checks.empty()) {
      Json arr = Json::array();
      for (const auto& g : c.gap_checks) {
        Json e{{"lambda", g.lambda}};
        if (g.max_gap) e["max_gap"] = *g.max_gap;
        if (g.min_gap) e["min_gap"] = *g.min_gap;
        arr.push_back(e);
      }
      j["gap_checks"] = arr;
    }
  }
  if (c.scenario == "relaxation-sweep" && c.assert_slope_in)
    j["assert_slope_in"] =
        Json::array({c.assert_slope_in->first, c.assert_slope_in->second});
  if (c.scenario == "stability-probe") {
    Json arr = Json::array();
    for (const auto& pt : c.lattice)
      arr.push_back(Json{{"lambda", pt.lambda}, {"mu", pt.mu}});
    j["lattice"] = arr;
  }
  if (c.scenario == "besov-report") j["s_values"] = c.s_values;
  return j;
}

std::string config_hash(const ScenarioConfig& c) {
  return hex64(fnv1a64(config_to_json(c).dump(2)));
}

// ---------------------------------------------------------------------------
// shared run helpers

namespace {

Json error_to_json(const ErrorReport& r) {
  return Json{{"epsilon", r.epsilon},       {"sup_err", r.sup_err},
              {"l1_high_err", r.l1_high_err}, {"l1_vel_err", r.l1_vel_err},
              {"total", r.total},           {"weighted", r.weighted}};
}

Json energy_to_json(const EnergyReport& r) {
  return Json{{"lf_sup_n_eu", r.lf_sup_n_eu},
              {"lf_l1_bn", r.lf_l1_bn},
              {"lf_l1_u", r.lf_l1_u},
              {"hf_sup", r.hf_sup},
              {"hf_l1", r.hf_l1},
              {"l2_bu", r.l2_bu},
              {"l1_damped_mode", r.l1_damped_mode},
              {"total", r.total},
              {"X0", r.X0},
              {"ratio", r.ratio}};
}

RegimeReport validated(const PhysParams& p, const std::string& where) {
  try {
    return validate_params(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where, e.what());
  }
}

double pick_dt(const DtPolicy& pol, double cached_auto, double T) {
  switch (pol.kind) {
    case DtPolicy::Kind::Auto:
      return cached_auto;
    case DtPolicy::Kind::FixedDt:
      return pol.dt;
    case DtPolicy::Kind::FixedSteps:
      return T / static_cast<double>(pol.steps);
  }
  return cached_auto;
}

}  // namespace

PairedRunResult run_relaxation_pair(const ScenarioConfig& cfg, double epsilon) {
  PhysParams p = cfg.params;
  p.epsilon = epsilon;
  const RegimeReport regime = validated(p, "params");
  const Grid& g = cfg.grid;
  const double T = cfg.integrator.T;

  InitialData id =
      build_initial_data(cfg.data.kind, p, g, cfg.data.amplitude, cfg.data.q, cfg.k0);

  EulerOptions eopt;
  eopt.rtol = cfg.integrator.rtol;
  eopt.atol = cfg.integrator.atol;

  PairedRunResult out;
  out.epsilon = epsilon;
  out.rho_gap = id.rho_gap;

  EulerState es = id.euler;
  PMState ms = id.pm;
  ErrorTracker et(g, p, cfg.k0);
  EnergyTracker xt(g, p, cfg.k0);
  BlowupMonitor mon;
  const double mass0e = euler_mass(es, p);
  const double mass0m = ms.rho.mean();

  double dt_auto = 0.0;
  try {
    while (T - es.t > 1e-12 * std::max(1.0, T)) {
      if (cfg.integrator.policy.kind == DtPolicy::Kind::Auto &&
          out.steps % 10 == 0)
        dt_auto = std::min(euler_auto_dt(es, T, p, true), pm_auto_dt(ms, T, p));
      double dt = pick_dt(cfg.integrator.policy, dt_auto, T);
      const double rem = T - es.t;
      if (dt >= rem * (1.0 - 1e-12)) dt = rem;
      if (auto trig = mon.observe(es, p, dt)) throw BlowUpDetected(*trig, es.t);
      et.observe(es, ms, dt);
      xt.observe(es, dt);
      es = euler_step(es, dt, p, eopt);
      ms = pm_step(ms, dt, p);
      ++out.steps;
      out.mass_drift_euler =
          std::max(out.mass_drift_euler,
                   std::abs(euler_mass(es, p) - mass0e) / std::abs(mass0e));
      out.mass_drift_pm =
          std::max(out.mass_drift_pm, std::abs(ms.rho.mean() - mass0m) /
                                          std::max(std::abs(mass0m), 1e-300));
    }
    et.observe(es, ms, 0.0);
    xt.observe(es, 0.0);
    out.completed = true;
    out.t_end = es.t;
  } catch (const BlowUpDetected& bd) {
    out.completed = false;
    out.trigger = to_string(bd.trigger);
    out.t_end = bd.time;
    if (regime.guaranteed)
      throw GuaranteedRegimeFailure(
          "blow-up in a guaranteed regime (eps=" + fmt_double(epsilon) +
          ", lambda=" + fmt_double(p.lambda) + ", mu=" + fmt_double(p.mu) +
          "): " + bd.what());
  }
  out.error = et.report();
  out.energy = xt.report();
  return out;
}

// ---------------------------------------------------------------------------
// scenario drivers

namespace {

struct Outcome {
  bool pass = true;
  bool gfail = false;
  Json results;
  std::vector<std::pair<std::string, std::string>> csv_files;
};

Outcome run_spectral_selftest(const ScenarioConfig& cfg) {
  Outcome oc;
  const Grid& g = cfg.grid;
  DyadicLadder ladder(g);

  // partition of unity on resolved nonzero modes
  double part_err = 0.0;
  for (int i = 0; i < g.size_spec(); ++i) {
    const double r = g.xi_abs(i);
    if (r == 0.0) continue;
    double s = 0.0;
    for (int j = ladder.j_min() - 2; j <= ladder.j_max() + 2; ++j)
      s += lp_phi(r / std::ldexp(1.0, j));
    part_err = std::max(part_err, std::abs(s - 1.0));
  }

  // Bernstein: spectral first/zeroth moment ratio of block-localized fields
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(ladder.j_min(), ladder.j_max());
  int done = 0;
  double worst_lo = 1e300, worst_hi = 0.0;  // ratio / 2^j extremes
  int guard = 0;
  while (done < cfg.trials && guard < 100 * cfg.trials) {
    ++guard;
    SpectralField u(g);
    for (double& v : u.values_mut()) v = unif(rng);
    const int jj = pick(rng);
    SpectralField uj = ladder.block(u, jj);
    double m0 = 0.0, m1 = 0.0;
    const auto& coef = uj.coeffs();
    for (int i = 0; i < g.size_spec(); ++i) {
      const double w = g.herm_weight(i) * std::norm(coef[i]);
      m0 += w;
      m1 += w * g.xi_abs(i) * g.xi_abs(i);
    }
    if (m0 < 1e-24) continue;  // block empty on this grid
    const double ratio = std::sqrt(m1 / m0) / std::ldexp(1.0, jj);
    worst_lo = std::min(worst_lo, ratio);
    worst_hi = std::max(worst_hi, ratio);
    ++done;
  }
  const bool bernstein_ok =
      done == cfg.trials && worst_lo >= 0.75 * (1.0 - 1e-9) &&
      worst_hi <= (8.0 / 3.0) * (1.0 + 1e-9);

  // block near-orthogonality
  SpectralField u(g);
  for (double& v : u.values_mut()) v = unif(rng);
  const double unorm = u.l2_spec();
  double ortho = 0.0;
  for (int j = ladder.j_min(); j <= ladder.j_max(); ++j) {
    SpectralField uj = ladder.block(u, j);
    for (int k = ladder.j_min(); k <= ladder.j_max(); ++k) {
      if (std::abs(j - k) < 2) continue;
      ortho = std::max(ortho, ladder.block(uj, k).l2_spec() / unorm);
    }
  }

  oc.pass = part_err <= 1e-12 && bernstein_ok && ortho <= 1e-12;
  oc.results = Json{{"partition_max_err", part_err},
                    {"bernstein",
                     Json{{"trials", done},
                          {"min_ratio_over_2j", worst_lo},
                          {"max_ratio_over_2j", worst_hi},
                          {"bounds", Json::array({0.75, 8.0 / 3.0})},
                          {"pass", bernstein_ok}}},
                    {"ortho_max_rel", ortho},
                    {"ladder", Json{{"j_min", ladder.j_min()},
                                    {"j_max", ladder.j_max()}}}};
  return oc;
}

// advance spectral coefficient arrays one snapshot interval per mode
void oracle_advance(std::vector<cd>& nh, std::vector<std::vector<cd>>& uh,
                    const Grid& g, double t0, double t1, const PhysParams& p,
                    double rtol, double atol) {
  const cd I(0.0, 1.0);
  const double dBinv = p.Binv(t1) - p.Binv(t0);
  const double damp = std::exp(-dBinv / (p.epsilon * p.epsilon));
  for (int i = 0; i < g.size_spec(); ++i) {
    const double r = g.xi_abs(i);
    bool nyq = false;
    for (int a = 0; a < g.dim; ++a)
      if (std::abs(g.k_component(i, a)) == g.n / 2) nyq = true;
    if (r == 0.0 || nyq) {  // no gradient on these rows: pure relaxation
      for (int a = 0; a < g.dim; ++a) uh[a][i] *= damp;
      continue;
    }
    const double x0 = g.xi_component(i, 0);
    const double x1 = g.dim == 2 ? g.xi_component(i, 1) : 0.0;
    ModeState msin;
    msin.n_hat = nh[i];
    const cd what = I * (x0 * uh[0][i] + (g.dim == 2 ? x1 * uh[1][i] : cd(0)));
    msin.m_hat = p.epsilon * what / r;
    if (g.dim == 2) msin.omega_hat = {I * (-x1 * uh[0][i] + x0 * uh[1][i])};
    const ModeState msout = propagate_mode(msin, {x0, x1}, t0, t1, p, rtol, atol);
    nh[i] = msout.n_hat;
    const cd wout = r * msout.m_hat / p.epsilon;
    if (g.dim == 1) {
      uh[0][i] = -I * wout / x0;
    } else {
      const cd tau = msout.omega_hat[0];
      uh[0][i] = -I * (x0 * wout - x1 * tau) / (r * r);
      uh[1][i] = -I * (x1 * wout + x0 * tau) / (r * r);
    }
  }
}

double state_max_diff(const EulerState& s, const std::vector<cd>& nh,
                      const std::vector<std::vector<cd>>& uh) {
  double m = 0.0;
  const auto& nc = s.n.coeffs();
  for (size_t i = 0; i < nc.size(); ++i) m = std::max(m, std::abs(nc[i] - nh[i]));
  for (size_t a = 0; a < s.u.size(); ++a) {
    const auto& uc = s.u[a].coeffs();
    for (size_t i = 0; i < uc.size(); ++i)
      m = std::max(m, std::abs(uc[i] - uh[a][i]));
  }
  return m;
}

// dt-halving order against a dt/16 reference, full nonlinear solvers
std::pair<double, double> dt_order_study(const ScenarioConfig& cfg) {
  PhysParams p = cfg.params;
  p.lambda = cfg.lambdas.front();
  p.epsilon = cfg.oracle_epsilons.front();
  const Grid& g = cfg.grid;
  const double T = cfg.integrator.T;
  InitialData id =
      build_initial_data(cfg.data.kind, p, g, cfg.data.amplitude, cfg.data.q, cfg.k0);

  const long s0 = 64;
  auto euler_at = [&](long steps) {
    EulerOptions o;
    o.dt_policy = DtPolicy::fixed_steps(steps);
    o.snapshots = 2;
    o.rtol = cfg.integrator.rtol;
    o.atol = cfg.integrator.atol;
    return run_euler(id.euler, T, p, o).states.back();
  };
  auto pm_at = [&](long steps) {
    PMOptions o;
    o.dt_policy = DtPolicy::fixed_steps(steps);
    o.snapshots = 2;
    return run_porous_medium(id.pm, T, p, o).states.back();
  };
  auto lin = [](const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    for (size_t i = 0; i < ca.size(); ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
    return m;
  };

  const EulerState eref = euler_at(16 * s0);
  double ee[3];
  for (int k = 0; k < 3; ++k) {
    const EulerState eh = euler_at(s0 << k);
    double m = lin(eh.n, eref.n);
    for (size_t a = 0; a < eh.u.size(); ++a) m = std::max(m, lin(eh.u[a], eref.u[a]));
    ee[k] = m;
  }
  const PMState mref = pm_at(16 * s0);
  double em[3];
  for (int k = 0; k < 3; ++k) em[k] = lin(pm_at(s0 << k).rho, mref.rho);

  const double oe = std::min(std::log2(ee[0] / ee[1]), std::log2(ee[1] / ee[2]));
  const double om = std::min(std::log2(em[0] / em[1]), std::log2(em[1] / em[2]));
  return {oe, om};
}

Outcome run_linear_oracle(const ScenarioConfig& cfg) {
  Outcome oc;
  Json cases = Json::array();
  double worst = 0.0;
  for (double lam : cfg.lambdas) {
    for (double eps : cfg.oracle_epsilons) {
      PhysParams p = cfg.params;
      p.lambda = lam;
      p.epsilon = eps;
      validated(p, "lambdas/epsilons");
      const Grid& g = cfg.grid;
      InitialData id = build_initial_data(cfg.data.kind, p, g, cfg.data.amplitude,
                                          cfg.data.q, cfg.k0);
      EulerOptions o;
      o.dt_policy = cfg.integrator.policy;
      o.snapshots = cfg.integrator.snapshots;
      o.rtol = cfg.integrator.rtol;
      o.atol = cfg.integrator.atol;
      o.nonlinear = false;
      const EulerTrajectory traj = run_euler(id.euler, cfg.integrator.T, p, o);

      std::vector<cd> nh = id.euler.n.coeffs();
      std::vector<std::vector<cd>> uh;
      for (const auto& ua : id.euler.u) uh.push_back(ua.coeffs());
      double max_err = 0.0;
      for (size_t k = 1; k < traj.times.size(); ++k) {
        oracle_advance(nh, uh, g, traj.times[k - 1], traj.times[k], p,
                       cfg.integrator.rtol, cfg.integrator.atol);
        max_err = std::max(max_err, state_max_diff(traj.states[k], nh, uh));
      }
      worst = std::max(worst, max_err);
      cases.push_back(Json{{"lambda", lam},
                           {"epsilon", eps},
                           {"max_err", max_err},
                           {"steps", traj.steps}});
    }
  }
  oc.pass = worst <= cfg.oracle_tolerance;
  oc.results = Json{{"cases", cases},
                    {"max_err", worst},
                    {"tolerance", cfg.oracle_tolerance}};
  std::string csv = "lambda,epsilon,max_err\n";
  for (const auto& e : cases)
    csv += csv_row({fmt_double(e["lambda"].get<double>()),
                    fmt_double(e["epsilon"].get<double>()),
                    fmt_double(e["max_err"].get<double>())});
  oc.csv_files.emplace_back("oracle.csv", csv);

  if (cfg.dt_study) {
    const auto [oe, om] = dt_order_study(cfg);
    oc.results["dt_order"] = Json{{"euler", oe}, {"porous_medium", om}};
  }
  return oc;
}

Outcome run_diffusion(const ScenarioConfig& cfg) {
  Outcome oc;
  const Grid& g = cfg.grid;
  Json rows = Json::array();
  std::string csv = "lambda,t,gap\n";
  for (double lam : cfg.lambdas) {
    PhysParams p = cfg.params;
    p.lambda = lam;
    validated(p, "lambdas");

    SpectralField n0(g);
    {
      auto& v = n0.values_mut();
      const double c = 0.5 * g.length;
      const double s2 = cfg.width * cfg.width;
      for (int i = 0; i < g.size_real(); ++i) {
        double r2;
        if (g.dim == 1) {
          const double x = i * g.dx() - c;
          r2 = x * x;
        } else {
          const double x = (i / g.n) * g.dx() - c;
          const double y = (i % g.n) * g.dx() - c;
          r2 = x * x + y * y;
        }
        v[i] = std::exp(-r2 / s2);
      }
    }
    n0.subtract_mean();
    n0.dealias();

    SpectralField ndot0(g);
    if (cfg.ndot0 == "darcy") {
      auto& c = ndot0.coeffs_mut();
      const auto& nc = n0.coeffs();
      const double pb = p.Pprime_bar() * p.b(0.0);
      for (int i = 0; i < g.size_spec(); ++i)
        c[i] = -pb * g.xi_abs(i) * g.xi_abs(i) * nc[i];
    } else {
      std::fill(ndot0.coeffs_mut().begin(), ndot0.coeffs_mut().end(), cd(0));
    }

    const FieldTrajectory wave =
        solve_damped_wave(n0, ndot0, cfg.t_eval, p, cfg.integrator.snapshots,
                          cfg.integrator.rtol, cfg.integrator.atol);
    const FieldTrajectory heat =
        solve_heat_timedep(n0, cfg.t_eval, p, cfg.integrator.snapshots);

    double gap_final = 0.0;
    for (size_t k = 0; k < wave.times.size(); ++k) {
      const double gap = diffusion_gap(wave, heat, wave.times[k]);
      csv += csv_row({fmt_double(lam), fmt_double(wave.times[k]), fmt_double(gap)});
      if (k + 1 == wave.times.size()) gap_final = gap;
    }
    Json row{{"lambda", lam}, {"t_eval", cfg.t_eval}, {"gap", gap_final}};
    for (const auto& gc : cfg.gap_checks) {
      if (std::abs(gc.lambda - lam) >= 1e-12) continue;
      bool ok = true;
      if (gc.max_gap && !(gap_final <= *gc.max_gap)) ok = false;
      if (gc.min_gap && !(gap_final >= *gc.min_gap)) ok = false;
      row["check_pass"] = ok;
      if (gc.max_gap) row["max_gap"] = *gc.max_gap;
      if (gc.min_gap) row["min_gap"] = *gc.min_gap;
      oc.pass = oc.pass && ok;
    }
    rows.push_back(row);
  }
  oc.results = Json{{"gaps", rows}};
  oc.csv_files.emplace_back("gaps.csv", csv);
  return oc;
}

Outcome run_sweep(const ScenarioConfig& cfg) {
  Outcome oc;
  std::vector<double> eps = cfg.eps_list;
  std::sort(eps.begin(), eps.end());

  for (double e : eps) {
    PhysParams p = cfg.params;
    p.epsilon = e;
    validated(p, "params");
  }

  std::vector<PairedRunResult> members(eps.size());
  size_t next = 0;
  while (next < eps.size()) {
    const size_t batch =
        std::min<size_t>(static_cast<size_t>(cfg.workers), eps.size() - next);
    std::vector<std::future<PairedRunResult>> futs;
    for (size_t i = 0; i < batch; ++i)
      futs.push_back(std::async(std::launch::async, run_relaxation_pair, cfg,
                                eps[next + i]));
    for (size_t i = 0; i < batch; ++i) members[next + i] = futs[i].get();
    next += batch;
  }

  Json marr = Json::array();
  std::string csv = "epsilon,sup_err,l1_high_err,l1_vel_err,total,wall_seconds\n";
  std::vector<std::pair<double, double>> fit_tot, fit_sup, fit_hi, fit_vel;
  double dm_min = 1e300, dm_max = 0.0, xr_min = 1e300, xr_max = 0.0;
  bool all_completed = true, mass_ok = true;
  for (const auto& m : members) {
    marr.push_back(Json{{"epsilon", m.epsilon},
                        {"completed", m.completed},
                        {"trigger", m.trigger},
                        {"t_end", m.t_end},
                        {"steps", m.steps},
                        {"rho_gap", m.rho_gap},
                        {"mass_drift_euler", m.mass_drift_euler},
                        {"mass_drift_pm", m.mass_drift_pm},
                        {"error", error_to_json(m.error)},
                        {"energy", energy_to_json(m.energy)}});
    csv += csv_row({fmt_double(m.epsilon), fmt_double(m.error.sup_err),
                    fmt_double(m.error.l1_high_err), fmt_double(m.error.l1_vel_err),
                    fmt_double(m.error.total), "0"});
    if (!m.completed) all_completed = false;
    if (m.mass_drift_euler > 1e-10 || m.mass_drift_pm > 1e-10) mass_ok = false;
    if (m.completed && m.error.total > 0)
      fit_tot.emplace_back(m.epsilon, m.error.total);
    if (m.completed && m.error.sup_err > 0)
      fit_sup.emplace_back(m.epsilon, m.error.sup_err);
    if (m.completed && m.error.l1_high_err > 0)
      fit_hi.emplace_back(m.epsilon, m.error.l1_high_err);
    if (m.completed && m.error.l1_vel_err > 0)
      fit_vel.emplace_back(m.epsilon, m.error.l1_vel_err);
    dm_min = std::min(dm_min, m.energy.l1_damped_mode);
    dm_max = std::max(dm_max, m.energy.l1_damped_mode);
    xr_min = std::min(xr_min, m.energy.ratio);
    xr_max = std::max(xr_max, m.energy.ratio);
  }

  Json fits;
  auto fit_into = [&](const char* name,
                      const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() >= 3) {
      const RateFit f = fit_rate(pts);
      fits[name] = Json{{"slope", f.slope},
                        {"intercept", f.intercept},
                        {"residual", f.residual}};
    }
  };
  fit_into("total", fit_tot);
  fit_into("sup_err", fit_sup);
  fit_into("l1_high_err", fit_hi);
  fit_into("l1_vel_err", fit_vel);

  oc.pass = all_completed && mass_ok;
  if (cfg.assert_slope_in) {
    const bool have = fits.contains("total");
    const double slope = have ? fits["total"]["slope"].get<double>() : 0.0;
    const bool ok = have && slope >= cfg.assert_slope_in->first &&
                    slope <= cfg.assert_slope_in->second;
    oc.results["slope_check"] =
        Json{{"lo", cfg.assert_slope_in->first},
             {"hi", cfg.assert_slope_in->second},
             {"slope", slope},
             {"pass", ok}};
    oc.pass = oc.pass && ok;
  }
  oc.results["members"] = marr;
  oc.results["fits"] = fits;
  oc.results["damped_mode_spread"] =
      Json{{"min", dm_min}, {"max", dm_max},
           {"ratio", dm_min > 0 ? dm_max / dm_min : 0.0}};
  oc.results["x_ratio_spread"] =
      Json{{"min", xr_min}, {"max", xr_max},
           {"ratio", xr_min > 0 ? xr_max / xr_min : 0.0}};
  oc.results["all_completed"] = all_completed;
  oc.results["mass_ok"] = mass_ok;
  oc.csv_files.emplace_back("sweep.csv", csv);
  return oc;
}

Outcome run_probe(const ScenarioConfig& cfg) {
  Outcome oc;
  const Grid& g = cfg.grid;
  Json rows = Json::array();
  std::string csv =
      "lambda,mu,regime,guaranteed,completed,trigger,t_end,x_ratio,hf_growth,"
      "mass_drift\n";
  for (const auto& pt : cfg.lattice) {
    PhysParams p = cfg.params;
    p.lambda = pt.lambda;
    p.mu = pt.mu;
    const RegimeReport regime = validated(p, "lattice");

    InitialData id = build_initial_data(cfg.data.kind, p, g, cfg.data.amplitude,
                                        cfg.data.q, cfg.k0);
    DyadicLadder ladder(g);
    EnergyTracker xt(g, p, cfg.k0);
    const double sreg = 0.5 * g.dim + 1.0;
    double h0 = -1.0, growth = 0.0, mass0 = euler_mass(id.euler, p), drift = 0.0;
    auto hf_norm = [&](const EulerState& s) {
      const int J = threshold_J(s.t, p, cfg.k0);
      const auto bn = ladder.block_norms(s.n);
      std::vector<std::vector<double>> bu;
      for (const auto& ua : s.u) bu.push_back(ladder.block_norms(ua));
      double h = 0.0;
      for (int j = ladder.j_min(); j <= ladder.j_max(); ++j) {
        if (j <= J) continue;
        double blk = bn[j - ladder.j_min()];
        for (const auto& b : bu) blk += p.epsilon * b[j - ladder.j_min()];
        h += std::pow(2.0, j * sreg) * blk;
      }
      return h;
    };

    EulerOptions o;
    o.dt_policy = cfg.integrator.policy;
    o.snapshots = cfg.integrator.snapshots;
    o.rtol = cfg.integrator.rtol;
    o.atol = cfg.integrator.atol;
    o.on_step = [&](const EulerState& s, double dt) {
      xt.observe(s, dt);
      const double h = hf_norm(s);
      if (h0 < 0) h0 = h;
      if (h0 > 0) growth = std::max(growth, h / h0);
      drift = std::max(drift, std::abs(euler_mass(s, p) - mass0) /
                                  std::abs(mass0));
    };

    bool completed = false;
    std::string trigger;
    double t_end = 0.0;
    try {
      const EulerTrajectory traj = run_euler(id.euler, cfg.integrator.T, p, o);
      completed = true;
      t_end = traj.times.back();
    } catch (const BlowUpDetected& bd) {
      trigger = to_string(bd.trigger);
      t_end = bd.time;
      if (regime.guaranteed) {
        oc.gfail = true;
        oc.pass = false;
      }
    }
    const EnergyReport er = xt.report();
    if (completed && drift > 1e-10) oc.pass = false;
    rows.push_back(Json{{"lambda", pt.lambda},
                        {"mu", pt.mu},
                        {"regime", to_string(regime.regime)},
                        {"guaranteed", regime.guaranteed},
                        {"critical_margin", regime.critical_margin},
                        {"completed", completed},
                        {"trigger", trigger},
                        {"t_end", t_end},
                        {"x_ratio", er.ratio},
                        {"hf_growth", growth},
                        {"hf_initial", h0},
                        {"mass_drift", drift},
                        {"energy", energy_to_json(er)}});
    csv += csv_row({fmt_double(pt.lambda), fmt_double(pt.mu),
                    to_string(regime.regime),
                    regime.guaranteed ? "true" : "false",
                    completed ? "true" : "false", trigger, fmt_double(t_end),
                    fmt_double(er.ratio), fmt_double(growth),
                    fmt_double(drift)});
  }
  oc.results = Json{{"outcomes", rows}};
  oc.csv_files.emplace_back("lattice.csv", csv);
  return oc;
}

Outcome run_besov_report(const ScenarioConfig& cfg) {
  Outcome oc;
  const Grid& g = cfg.grid;
  PhysParams p = cfg.params;
  validated(p, "params");
  InitialData id = build_initial_data(cfg.data.kind, p, g, cfg.data.amplitude,
                                      cfg.data.q, cfg.k0);
  DyadicLadder ladder(g);

  SpectralField drho = id.pm.rho;
  {
    auto& c = drho.coeffs_mut();
    c[0] -= p.rho_bar;  // fluctuation about the background
  }

  const auto bn = ladder.block_norms(id.euler.n);
  std::vector<std::vector<double>> bu;
  for (const auto& ua : id.euler.u) bu.push_back(ladder.block_norms(ua));
  const auto br = ladder.block_norms(drho);

  std::string csv = "j,xi_scale,n,";
  for (size_t a = 0; a < bu.size(); ++a) csv += "u" + std::to_string(a) + ",";
  csv += "rho_fluct\n";
  Json blocks = Json::array();
  for (int j = ladder.j_min(); j <= ladder.j_max(); ++j) {
    const int i = j - ladder.j_min();
    std::vector<std::string> row{std::to_string(j),
                                 fmt_double(std::ldexp(1.0, j)),
                                 fmt_double(bn[i])};
    Json bj{{"j", j}, {"n", bn[i]}};
    for (size_t a = 0; a < bu.size(); ++a) {
      row.push_back(fmt_double(bu[a][i]));
      bj["u" + std::to_string(a)] = bu[a][i];
    }
    row.push_back(fmt_double(br[i]));
    bj["rho_fluct"] = br[i];
    csv += csv_row(row);
    blocks.push_back(bj);
  }

  Json norms = Json::array();
  for (double s : cfg.s_values) {
    double un = 0.0;
    for (const auto& ua : id.euler.u) un += ladder.besov(ua, s);
    norms.push_back(Json{{"s", s},
                         {"n", ladder.besov(id.euler.n, s)},
                         {"u", un},
                         {"rho_fluct", ladder.besov(drho, s)}});
  }

  oc.results = Json{{"blocks", blocks},
                    {"besov", norms},
                    {"rho_gap", id.rho_gap},
                    {"threshold_J0", threshold_J(0.0, p, cfg.k0)}};
  oc.csv_files.emplace_back("blocks.csv", csv);
  return oc;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, bool verbose) {
  {
    PhysParams p = cfg.params;
    p.epsilon = cfg.eps_list.front();
    validated(p, "params");
  }

  const auto t0 = std::chrono::steady_clock::now();
  Outcome oc;
  try {
    if (cfg.scenario == "spectral-selftest")
      oc = run_spectral_selftest(cfg);
    else if (cfg.scenario == "linear-oracle")
      oc = run_linear_oracle(cfg);
    else if (cfg.scenario == "diffusion-phenomenon")
      oc = run_diffusion(cfg);
    else if (cfg.scenario == "relaxation-sweep")
      oc = run_sweep(cfg);
    else if (cfg.scenario == "stability-probe")
      oc = run_probe(cfg);
    else if (cfg.scenario == "besov-report")
      oc = run_besov_report(cfg);
    else
      fail("scenario", "unknown scenario '" + cfg.scenario + "'");
  } catch (const GuaranteedRegimeFailure& e) {
    oc.pass = false;
    oc.gfail = true;
    oc.results["failure"] = e.what();
  }

  ScenarioResult res;
  res.pass = oc.pass;
  res.guaranteed_failure = oc.gfail;
  res.exit_code = oc.gfail ? 3 : (oc.pass ? 0 : 1);

  Json manifest;
  manifest["scenario"] = cfg.scenario;
  manifest["config"] = config_to_json(cfg);
  manifest["config_hash"] = config_hash(cfg);
  manifest["pass"] = oc.pass;
  manifest["guaranteed_regime_failure"] = oc.gfail;
  manifest["wall_seconds"] = 0.0;  // masked; real timing goes to stderr
  manifest["results"] = oc.results;
  res.manifest = manifest;

  const fs::path dir(cfg.outputs.directory);
  fs::create_directories(dir);
  if (cfg.outputs.csv) {
    for (const auto& [name, body] : oc.csv_files) {
      atomic_write(dir / name, body);
      res.files_written.push_back((dir / name).string());
    }
  }
  atomic_write(dir / "manifest.json", manifest.dump(2) + "\n");
  res.files_written.push_back((dir / "manifest.json").string());

  if (verbose) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::fprintf(stderr, "[%s] %s in %.2fs, exit %d\n", cfg.scenario.c_str(),
                 oc.pass ? "pass" : "FAIL", secs, res.exit_code);
  }
  return res;
}

Json summarize_results(const std::string& dir) {
  if (!fs::is_directory(dir)) fail(dir, "not a directory");
  std::vector<fs::path> manifests;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() == "manifest.json")
      manifests.push_back(e.path());
  }
  std::sort(manifests.begin(), manifests.end());
  if (manifests.empty()) fail(dir, "no manifest.json found");

  Json runs = Json::array(), slopes = Json::array(), regimes = Json::array();
  int npass = 0, nfail = 0;
  for (const auto& mp : manifests) {
    std::ifstream in(mp);
    Json m;
    try {
      in >> m;
    } catch (const std::exception& e) {
      fail(mp.string(), std::string("unreadable manifest: ") + e.what());
    }
    const bool pass = m.value("pass", false);
    (pass ? npass : nfail)++;
    runs.push_back(Json{{"path", fs::relative(mp, dir).string()},
                        {"scenario", m.value("scenario", "")},
                        {"pass", pass},
                        {"guaranteed_regime_failure",
                         m.value("guaranteed_regime_failure", false)},
                        {"config_hash", m.value("config_hash", "")}});
    if (m.contains("results")) {
      const Json& r = m["results"];
      if (r.contains("fits") && r["fits"].contains("total"))
        slopes.push_back(Json{{"path", fs::relative(mp, dir).string()},
                              {"slope", r["fits"]["total"]["slope"]},
                              {"config_hash", m.value("config_hash", "")}});
      if (r.contains("outcomes"))
        for (const auto& row : r["outcomes"])
          regimes.push_back(Json{{"lambda", row.value("lambda", 0.0)},
                                 {"mu", row.value("mu", 0.0)},
                                 {"regime", row.value("regime", "")},
                                 {"completed", row.value("completed", false)},
                                 {"x_ratio", row.value("x_ratio", 0.0)}});
    }
  }
  Json summary{{"manifests", static_cast<int>(manifests.size())},
               {"pass", npass},
               {"fail", nfail},
               {"runs", runs},
               {"slopes", slopes},
               {"regime_table", regimes}};
  atomic_write(fs::path(dir) / "summary.json", summary.dump(2) + "\n");
  return summary;
}

}  // namespace relaxlab
