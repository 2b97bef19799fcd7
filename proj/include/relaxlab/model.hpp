#pragma once
// Model data for the damped compressible Euler system
//
//   dn/dt + u.grad n + (P'(rho_bar) + G(n)) div u = 0
//   eps^2 (du/dt + u.grad u) + grad n + u / b(t) = 0,   b(t) = (1+t)^lambda / mu
//
// and its porous-medium limit  d(rho)/dt = div( b(t) grad P(rho) ).
// n is the enthalpy-like variable n(rho) = int_{rho_bar}^{rho} P'(s)/s ds,
// so grad n = grad P / rho holds exactly and G(n) = P'(rho) - P'(rho_bar).
// Pressure is the gamma-law P(rho) = A rho^gamma.

#include <stdexcept>
#include <string>

namespace relaxlab {

enum class Regime {
  Overdamped,        // lambda < 0
  ConstantDamping,   // lambda = 0
  Underdamped,       // 0 < lambda < 1
  CriticalStable,    // lambda = 1, mu > 2 eps^2
  CriticalViolated,  // lambda = 1, mu <= 2 eps^2
  Supercritical,     // 1 < lambda <= 2
};

std::string to_string(Regime r);

struct RegimeReport {
  Regime regime;
  bool guaranteed;         // global small-data existence covered by the theory
  double critical_margin;  // mu - 2 eps^2, the lambda = 1 stability margin
  std::string detail;
};

struct PhysParams {
  double epsilon = 1.0;   // relaxation parameter, in (0, 1]
  double mu = 1.0;        // damping strength, > 0
  double lambda = 0.0;    // damping exponent, <= 2
  double rho_bar = 1.0;   // background density, > 0
  double gamma = 2.0;     // adiabatic exponent, >= 1
  double A = 0.5;         // pressure constant, > 0
  int dim = 1;            // spatial dimension, 1 or 2

  // damping profile and its primitives
  double b(double t) const;       // (1+t)^lambda / mu
  double bprime(double t) const;  // d/dt b
  double B(double t) const;       // int_0^t b
  double Binv(double t) const;    // int_0^t 1/b

  // gamma-law pressure and the n <-> rho change of variables
  double pressure(double rho) const;        // A rho^gamma
  double pressure_prime(double rho) const;  // A gamma rho^(gamma-1)
  double n_of_rho(double rho) const;
  double rho_of_n(double n) const;  // inverse; throws std::domain_error outside range
  double G(double n) const;         // P'(rho(n)) - P'(rho_bar)
  double Pprime_bar() const { return pressure_prime(rho_bar); }

  // admissible density band kept by the solvers
  double rho_min() const { return rho_bar / 4.0; }
  double rho_max() const { return 4.0 * rho_bar; }
};

// Rejects unusable parameters (throws std::invalid_argument), classifies the
// damping regime and reports whether the global theory covers it.
RegimeReport validate_params(const PhysParams& p);

}  // namespace relaxlab
