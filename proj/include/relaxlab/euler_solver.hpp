#pragma once
// Split-step integrator for the damped Euler system in the (n, u) variables.
// Strang composition: exact-in-tolerance stiff half-steps (per-mode 2x2 kernel
// from linear_lab plus exact incompressible decay), an explicit SSP-RK3 step
// of the advective residual {-u.grad n - G(n) div u, -u.grad u} with 2/3-rule
// dealiasing in between.  The stiff kernel removes the 1/eps^2 restriction,
// so dt is limited only by the advective CFL.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relaxlab/linear_lab.hpp"
#include "relaxlab/model.hpp"
#include "relaxlab/spectral.hpp"

namespace relaxlab {

struct EulerState {
  SpectralField n;
  std::vector<SpectralField> u;  // d components
  double t = 0.0;
};

enum class BlowupTrigger { GradientCap, GradientBudget, Admissibility, NonFinite };
std::string to_string(BlowupTrigger tr);

struct BlowUpDetected : std::runtime_error {
  BlowupTrigger trigger;
  double time;
  BlowUpDetected(BlowupTrigger tr, double t)
      : std::runtime_error("blow-up monitor fired: " + to_string(tr) + " at t = " +
                           std::to_string(t)),
        trigger(tr),
        time(t) {}
};

struct BlowupCaps {
  double cap_factor = 1e3;        // fire when grad exceeds cap_factor * initial
  double integral_budget = 100.0; // fire when int ||grad(n,u)||_inf dt exceeds this
};

// Tracks ||grad(n,u)||_Linf along a run; total (never throws by itself).
class BlowupMonitor {
 public:
  explicit BlowupMonitor(BlowupCaps caps = {}) : caps_(caps) {}
  std::optional<BlowupTrigger> observe(const EulerState& s, const PhysParams& p,
                                       double dt);
  double grad_integral() const { return integral_; }
  double last_grad() const { return last_; }

 private:
  BlowupCaps caps_;
  double initial_ = -1.0, integral_ = 0.0, last_ = 0.0;
};

struct DtPolicy {
  enum class Kind { Auto, FixedDt, FixedSteps };
  Kind kind = Kind::Auto;
  double dt = 0.0;
  long steps = 0;
  static DtPolicy automatic() { return {}; }
  static DtPolicy fixed_dt(double dt);
  static DtPolicy fixed_steps(long n);
};

struct EulerOptions {
  DtPolicy dt_policy{};
  int snapshots = 200;
  double rtol = 1e-10, atol = 1e-12;  // stiff-kernel tolerances
  bool nonlinear = true;              // false: pure per-mode linear evolution
  BlowupCaps caps{};
  // called on every accepted step with the state at t and the duration to the
  // next state (left-endpoint quadrature weight); final state gets weight 0
  std::function<void(const EulerState&, double)> on_step;
};

struct EulerTrajectory {
  std::vector<double> times;
  std::vector<EulerState> states;
  double mass0 = 0.0;           // mean of rho at t=0
  double mass_drift_rel = 0.0;  // max |mass - mass0| / |mass0|
  long steps = 0;
};

// mean of rho_of_n(n) over the grid
double euler_mass(const EulerState& s, const PhysParams& p);

// advective CFL: 0.4 dx / (max|u| + sqrt(2 P'(rho_bar))/eps), the sound-speed
// term only when the nonlinear coupling is active; capped by T/1e4
double euler_auto_dt(const EulerState& s, double T, const PhysParams& p,
                     bool nonlinear);

EulerState euler_step(const EulerState& s, double dt, const PhysParams& p,
                      const EulerOptions& opt);

// Steps to T, feeding every accepted step to opt.on_step and the monitor.
// Throws BlowUpDetected when the monitor fires, std::invalid_argument on
// parameters rejected by validate_params.
EulerTrajectory run_euler(const EulerState& init, double T, const PhysParams& p,
                          const EulerOptions& opt = {});

}  // namespace relaxlab
