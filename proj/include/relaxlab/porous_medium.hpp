#pragma once
// Porous-medium limit  d(rho)/dt = Delta( b(t) P(rho) )  with Darcy velocity
// u* = -b(t) grad P(rho) / rho.  Split scheme: the linearization
// P(rho) ~ P(rho_bar) + P'(rho_bar)(rho - rho_bar) is advanced exactly per
// mode through B(t); the quadratic-and-up remainder goes through an explicit
// SSP-RK3 stage with dealiasing.  The zero mode never moves, so mass is
// conserved bitwise.

#include <functional>
#include <vector>

#include "relaxlab/euler_solver.hpp"  // DtPolicy, BlowUpDetected
#include "relaxlab/model.hpp"
#include "relaxlab/spectral.hpp"

namespace relaxlab {

struct PMState {
  SpectralField rho;
  double t = 0.0;
};

struct PMOptions {
  DtPolicy dt_policy{};
  int snapshots = 200;
  std::function<void(const PMState&, double)> on_step;
};

struct PMTrajectory {
  std::vector<double> times;
  std::vector<PMState> states;
  double mass0 = 0.0;
  double mass_drift_rel = 0.0;
  long steps = 0;
};

// explicit-stage stability bound for the remainder, capped by T/1e4
double pm_auto_dt(const PMState& s, double T, const PhysParams& p);

PMState pm_step(const PMState& s, double dt, const PhysParams& p);

PMTrajectory run_porous_medium(const PMState& init, double T, const PhysParams& p,
                               const PMOptions& opt = {});

// u* = -(1+t)^lambda / (mu rho) * grad P(rho), spectral gradients
std::vector<SpectralField> darcy_velocity(const PMState& s, const PhysParams& p);

}  // namespace relaxlab
