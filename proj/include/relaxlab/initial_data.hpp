#pragma once
// Initial-data families for the relaxation experiments.  The shared density
// profile is rho_bar + amplitude * (unit Gaussian bump at the domain center,
// mean-corrected).  The Euler velocity depends on the preparation kind:
//   well-prepared        u0 = Darcy field of rho0 (no initial layer)
//   ill-prepared-O1      u0 = amplitude * fixed divergence-full profile
//   ill-prepared-sing    the same profile scaled by 1/eps
//   paper-section4       rho0 low-passed below the t=0 threshold index,
//                        u0 = eps * amplitude * bump
//   gap-controlled(q)    rho0 offset by eps^q * amplitude * fixed unit-norm
//                        profile (so the density gap scales exactly as eps^q)

#include "relaxlab/euler_solver.hpp"
#include "relaxlab/porous_medium.hpp"

namespace relaxlab {

enum class DataKind {
  WellPrepared,
  IllPreparedO1,
  IllPreparedSingular,
  PaperSection4,
  GapControlled,
};

DataKind data_kind_from_string(const std::string& s);
std::string to_string(DataKind k);

struct InitialData {
  EulerState euler;
  PMState pm;
  double rho_gap = 0.0;  // || rho0^eps - rho0* ||_{B^{d/2-1}}
};

InitialData build_initial_data(DataKind kind, const PhysParams& p, const Grid& g,
                               double amplitude, double q = 0.5,
                               int k0 = kDefaultK0);

}  // namespace relaxlab
