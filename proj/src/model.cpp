#include "relaxlab/model.hpp"

#include <cmath>

namespace relaxlab {

double PhysParams::b(double t) const { return std::pow(1.0 + t, lambda) / mu; }

double PhysParams::bprime(double t) const {
  return lambda * std::pow(1.0 + t, lambda - 1.0) / mu;
}

double PhysParams::B(double t) const {
  if (lambda == -1.0) return std::log1p(t) / mu;
  return (std::pow(1.0 + t, lambda + 1.0) - 1.0) / (mu * (lambda + 1.0));
}

double PhysParams::Binv(double t) const {
  if (lambda == 1.0) return mu * std::log1p(t);
  return mu * (std::pow(1.0 + t, 1.0 - lambda) - 1.0) / (1.0 - lambda);
}

double PhysParams::pressure(double rho) const { return A * std::pow(rho, gamma); }

double PhysParams::pressure_prime(double rho) const {
  return A * gamma * std::pow(rho, gamma - 1.0);
}

double PhysParams::n_of_rho(double rho) const {
  if (rho <= 0.0) throw std::domain_error("n_of_rho: rho must be positive");
  if (gamma == 1.0) return A * std::log(rho / rho_bar);
  return A * gamma / (gamma - 1.0) *
         (std::pow(rho, gamma - 1.0) - std::pow(rho_bar, gamma - 1.0));
}

double PhysParams::rho_of_n(double n) const {
  if (gamma == 1.0) return rho_bar * std::exp(n / A);
  double base = std::pow(rho_bar, gamma - 1.0) + n * (gamma - 1.0) / (A * gamma);
  if (base <= 0.0) throw std::domain_error("rho_of_n: n below vacuum threshold");
  return std::pow(base, 1.0 / (gamma - 1.0));
}

double PhysParams::G(double n) const {
  return pressure_prime(rho_of_n(n)) - Pprime_bar();
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Overdamped: return "overdamped";
    case Regime::ConstantDamping: return "constant-damping";
    case Regime::Underdamped: return "underdamped";
    case Regime::CriticalStable: return "critical-stable";
    case Regime::CriticalViolated: return "critical-violated";
    case Regime::Supercritical: return "supercritical";
  }
  return "unknown";
}

RegimeReport validate_params(const PhysParams& p) {
  auto bad = [](const std::string& msg) { throw std::invalid_argument("params: " + msg); };
  if (!std::isfinite(p.epsilon) || p.epsilon <= 0.0 || p.epsilon > 1.0)
    bad("epsilon must lie in (0, 1]");
  if (!std::isfinite(p.mu) || p.mu <= 0.0) bad("mu must be positive");
  if (!std::isfinite(p.lambda) || p.lambda > 2.0) bad("lambda must lie in (-inf, 2]");
  if (!std::isfinite(p.rho_bar) || p.rho_bar <= 0.0) bad("rho_bar must be positive");
  if (!std::isfinite(p.gamma) || p.gamma < 1.0) bad("gamma must be >= 1");
  if (!std::isfinite(p.A) || p.A <= 0.0) bad("pressure constant A must be positive");
  if (p.dim != 1 && p.dim != 2) bad("dim must be 1 or 2");

  RegimeReport r;
  r.critical_margin = p.mu - 2.0 * p.epsilon * p.epsilon;
  if (p.lambda < 0.0) {
    r.regime = Regime::Overdamped;
    r.guaranteed = true;
    r.detail = "lambda < 0: damping strengthens in time";
  } else if (p.lambda == 0.0) {
    r.regime = Regime::ConstantDamping;
    r.guaranteed = true;
    r.detail = "constant damping mu";
  } else if (p.lambda < 1.0) {
    r.regime = Regime::Underdamped;
    r.guaranteed = true;
    r.detail = "0 < lambda < 1: damping decays, still globally effective";
  } else if (p.lambda == 1.0) {
    if (r.critical_margin > 0.0) {
      r.regime = Regime::CriticalStable;
      r.guaranteed = true;
      r.detail = "critical decay with mu > 2 eps^2";
    } else {
      r.regime = Regime::CriticalViolated;
      r.guaranteed = false;
      r.detail = "critical decay with mu <= 2 eps^2: stability condition fails";
    }
  } else {
    r.regime = Regime::Supercritical;
    r.guaranteed = false;
    r.detail = "lambda > 1: integrable damping, no global theory";
  }
  return r;
}

}  // namespace relaxlab
