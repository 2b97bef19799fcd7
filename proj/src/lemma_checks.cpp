#include "relaxlab/lemma_checks.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace relaxlab {

namespace {

struct OdeState {
  double Y;     // f * X on the equality trajectory
  double Iori;  // int (c - f') X
  double IA;    // int A
  double Igro;  // int (c + alpha f') X
};

OdeState rhs(const OdeLemmaInstance& in, double t, const OdeState& s) {
  const double ft = in.f(t);
  const double fp = in.fprime(t);
  const double ct = in.c(t);
  const double At = in.A(t);
  const double X = s.Y / ft;
  OdeState d;
  d.Y = 0.5 * At - 0.5 * (ct - fp) * X;
  d.Iori = (ct - fp) * X;
  d.IA = At;
  d.Igro = (ct + in.alpha * fp) * X;
  return d;
}

OdeState axpy(const OdeState& a, double h, const OdeState& b) {
  return {a.Y + h * b.Y, a.Iori + h * b.Iori, a.IA + h * b.IA,
          a.Igro + h * b.Igro};
}

}  // namespace

OdeLemmaReport verify_ode_lemma(const OdeLemmaInstance& inst) {
  if (!(inst.T1 > inst.T0)) throw std::invalid_argument("ode lemma: T1 <= T0");
  if (inst.grid_n < 2) throw std::invalid_argument("ode lemma: grid_n < 2");
  if (!(inst.X0 >= 0.0)) throw std::invalid_argument("ode lemma: X0 < 0");

  const int n = inst.grid_n;
  const double h = (inst.T1 - inst.T0) / (n - 1);

  // hypothesis scan on the same grid plus midpoints
  for (int i = 0; i < 2 * n - 1; ++i) {
    const double t = inst.T0 + 0.5 * h * i;
    if (!(inst.f(t) > 0.0))
      throw std::invalid_argument("ode lemma: f must be positive");
    if (inst.fprime(t) < -1e-14 * std::abs(inst.f(t)))
      throw std::invalid_argument("ode lemma: f must be nondecreasing");
    if (inst.A(t) < 0.0)
      throw std::invalid_argument("ode lemma: A must be nonnegative");
    if (inst.c(t) + inst.alpha * inst.fprime(t) < -1e-12)
      throw std::invalid_argument("ode lemma: c + alpha f' must be >= 0");
  }

  const double f0 = inst.f(inst.T0);
  const double rhs0 = 2.0 * f0 * inst.X0;

  OdeLemmaReport rep;
  OdeState s{f0 * inst.X0, 0.0, 0.0, 0.0};
  const double gexp = 0.5 * (1.0 + inst.alpha);
  for (int i = 0;; ++i) {
    const double t = inst.T0 + h * i;
    const double lhs_ori = 2.0 * s.Y + s.Iori;
    const double rhs_ori = rhs0 + s.IA;
    rep.max_violation_ori =
        std::max(rep.max_violation_ori,
                 (lhs_ori - rhs_ori) / std::max(1.0, std::abs(rhs_ori)));
    const double lhs_gro = 2.0 * s.Y + s.Igro;
    const double rhs_gro = std::pow(inst.f(t) / f0, gexp) * rhs_ori;
    rep.max_violation_gro =
        std::max(rep.max_violation_gro,
                 (lhs_gro - rhs_gro) / std::max(1.0, std::abs(rhs_gro)));
    if (i == n - 1) break;
    const OdeState k1 = rhs(inst, t, s);
    const OdeState k2 = rhs(inst, t + 0.5 * h, axpy(s, 0.5 * h, k1));
    const OdeState k3 = rhs(inst, t + 0.5 * h, axpy(s, 0.5 * h, k2));
    const OdeState k4 = rhs(inst, t + h, axpy(s, h, k3));
    s.Y += h / 6.0 * (k1.Y + 2.0 * k2.Y + 2.0 * k3.Y + k4.Y);
    s.Iori += h / 6.0 * (k1.Iori + 2.0 * k2.Iori + 2.0 * k3.Iori + k4.Iori);
    s.IA += h / 6.0 * (k1.IA + 2.0 * k2.IA + 2.0 * k3.IA + k4.IA);
    s.Igro += h / 6.0 * (k1.Igro + 2.0 * k2.Igro + 2.0 * k3.Igro + k4.Igro);
  }
  return rep;
}

MaxRegReport verify_maximal_regularity(const SpectralField& v0,
                                       const FieldTrajectory& f,
                                       const PhysParams& p, double s) {
  if (f.times.size() != f.fields.size() || f.times.empty())
    throw std::invalid_argument("maxreg: malformed forcing trajectory");
  for (const auto& fld : f.fields)
    if (!(fld.grid() == v0.grid()))
      throw std::invalid_argument("maxreg: grid mismatch");
  for (size_t k = 1; k < f.times.size(); ++k)
    if (!(f.times[k] > f.times[k - 1]))
      throw std::invalid_argument("maxreg: times must increase");

  const Grid& g = v0.grid();
  DyadicLadder ladder(g);
  constexpr double kCstar = 9.0 / 16.0;

  SpectralField v = v0;
  double int_bv = 0.0;   // trapezoid of b(t) ||v||_{B^{s+2}}
  double int_f = 0.0;    // trapezoid of ||f||_{B^s}
  double prev_bv = p.b(f.times[0]) * ladder.besov(v, s + 2.0);
  double prev_nf = ladder.besov(f.fields[0], s);
  const double v0_norm = ladder.besov(v0, s);

  MaxRegReport rep;
  auto check = [&](double /*t*/) {
    const double lhs = ladder.besov(v, s) + kCstar * int_bv;
    const double rhs = v0_norm + int_f;
    rep.max_violation_rel = std::max(
        rep.max_violation_rel, (lhs - rhs) / std::max(rhs, 1e-300));
    rep.lhs_final = lhs;
    rep.rhs_final = rhs;
  };
  check(f.times[0]);

  for (size_t k = 1; k < f.times.size(); ++k) {
    const double t0 = f.times[k - 1], t1 = f.times[k];
    const double dt = t1 - t0;
    const double dB = p.B(t1) - p.B(t0);
    // one Duhamel increment: exact kernel, trapezoid on the forcing
    auto& vc = v.coeffs_mut();
    const auto& f0c = f.fields[k - 1].coeffs();
    const auto& f1c = f.fields[k].coeffs();
    for (size_t i = 0; i < vc.size(); ++i) {
      const double xi = g.xi_abs(i);
      const double decay = std::exp(-xi * xi * dB);
      vc[i] = decay * (vc[i] + 0.5 * dt * f0c[i]) + 0.5 * dt * f1c[i];
    }
    const double cur_bv = p.b(t1) * ladder.besov(v, s + 2.0);
    const double cur_nf = ladder.besov(f.fields[k], s);
    int_bv += 0.5 * dt * (prev_bv + cur_bv);
    int_f += 0.5 * dt * (prev_nf + cur_nf);
    prev_bv = cur_bv;
    prev_nf = cur_nf;
    check(t1);
  }
  return rep;
}

}  // namespace relaxlab
