#pragma once
// Derived quantities tied to the relaxation theory: the damped mode
// z = u + b(t) grad n, the energy functional X(t) (seven Chemin-Lerner
// summands), the Euler-vs-porous-medium error norms with their lambda-sign
// dependent time weights, and log-log rate fitting for eps sweeps.

#include <memory>
#include <vector>

#include "relaxlab/chemin_lerner.hpp"
#include "relaxlab/euler_solver.hpp"
#include "relaxlab/porous_medium.hpp"

namespace relaxlab {

std::vector<SpectralField> damped_mode(const EulerState& s, const PhysParams& p);

struct EnergyReport {
  double lf_sup_n_eu = 0;      // low band, sup_t ||(n, eps u)||_{B^{d/2}}
  double lf_l1_bn = 0;         // low band, L1_t ||b n||_{B^{d/2+2}}
  double lf_l1_u = 0;          // low band, L1_t ||u||_{B^{d/2+1}}
  double hf_sup = 0;           // high band, sup_t eps ||b (n, eps u)||_{B^{d/2+1}}
  double hf_l1 = 0;            // high band, L1_t (1/eps) ||(n, eps u)||_{B^{d/2+1}}
  double l2_bu = 0;            // all bands, L2_t ||b^{-1/2} u||_{B^{d/2}}
  double l1_damped_mode = 0;   // L1_t (1/eps) ||b^{-1} u + grad n||_{B^{d/2}}
  double total = 0;
  double X0 = 0;
  double ratio = 0;  // total / X0 when X0 > 0
};

// Streams a run; feed every accepted step (first sample must be t = 0).
class EnergyTracker {
 public:
  EnergyTracker(const Grid& g, const PhysParams& p, int k0 = kDefaultK0);
  void observe(const EulerState& s, double dt);
  EnergyReport report() const;
  double X0() const { return X0_; }

 private:
  DyadicLadder ladder_;
  PhysParams p_;
  int k0_;
  double X0_ = -1.0;
  std::vector<NormAccumulator> acc_;  // fixed layout, see diagnostics.cpp
};

struct ErrorReport {
  double epsilon = 0;
  double sup_err = 0;      // density, tilde-L^inf in time at regularity d/2-1
  double l1_high_err = 0;  // density, L1 in time at regularity d/2+1
  double l1_vel_err = 0;   // velocity, L1 in time at regularity d/2
  double total = 0;
  bool weighted = false;  // (1+tau)^{-lambda} weights active (0 < lambda <= 1)
};

// Incremental form driven along a paired run (matching times required).
class ErrorTracker {
 public:
  ErrorTracker(const Grid& g, const PhysParams& p, int k0 = kDefaultK0);
  void observe(const EulerState& e, const PMState& m, double dt);
  ErrorReport report() const;

 private:
  DyadicLadder ladder_;
  PhysParams p_;
  std::vector<NormAccumulator> acc_;
};

// Post-hoc form over stored trajectories with matching snapshot times.
ErrorReport error_norms(const EulerTrajectory& te, const PMTrajectory& tm,
                        const PhysParams& p, int k0 = kDefaultK0);

struct RateFit {
  double slope = 0, intercept = 0, residual = 0;
};

// least squares through (ln eps, ln err); inputs must be positive
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs);

}  // namespace relaxlab
