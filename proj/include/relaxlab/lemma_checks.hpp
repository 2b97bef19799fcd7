#pragma once
// Numeric verifiers for the two workhorse ODE estimates.
//
// Differential-inequality lemma: given d/dt(f X^2) + c X^2 <= A X on [T0,T1]
// with f > 0 nondecreasing, A >= 0, the verifier builds the equality-case X
// (the hardest admissible instance) and checks both conclusions,
//   2 f X(t) + int_{T0}^t (c - f') X <= 2 f(T0) X(T0) + int A
//   2 f X(t) + int (c + alpha f') X <= (f(t)/f(T0))^{(1+alpha)/2} (2 f(T0) X(T0) + int A)
// the latter under c + alpha f' >= 0.
//
// Maximal-regularity lemma: for the flow dv/dt - b(t) Delta v = f the bound
//   ||v(t)||_{B^s} + (9/16) int_0^t b ||v||_{B^{s+2}} <= ||v0||_{B^s} + int_0^t ||f||_{B^s}
// is checked at every sample time (the proof gives it uniformly in t).

#include <functional>

#include "relaxlab/dyadic.hpp"
#include "relaxlab/linear_lab.hpp"
#include "relaxlab/model.hpp"

namespace relaxlab {

struct OdeLemmaInstance {
  std::function<double(double)> f, fprime, c, A;
  double T0 = 0.0, T1 = 1.0;
  double alpha = 0.0;
  double X0 = 1.0;
  int grid_n = 4001;  // uniform construction/check grid
};

struct OdeLemmaReport {
  double max_violation_ori = 0.0;  // max_t (LHS - RHS) / max(1, |RHS|)
  double max_violation_gro = 0.0;
  bool pass(double slack = 1e-8) const {
    return max_violation_ori <= slack && max_violation_gro <= slack;
  }
};

OdeLemmaReport verify_ode_lemma(const OdeLemmaInstance& inst);

struct MaxRegReport {
  double max_violation_rel = 0.0;
  double lhs_final = 0.0, rhs_final = 0.0;
  bool pass(double slack = 1e-6) const { return max_violation_rel <= slack; }
};

// v0 and the forcing samples must share a grid; forcing times must be
// fine enough to resolve b(t) |xi|_max^2 (caller's responsibility)
MaxRegReport verify_maximal_regularity(const SpectralField& v0,
                                       const FieldTrajectory& f,
                                       const PhysParams& p, double s);

}  // namespace relaxlab
