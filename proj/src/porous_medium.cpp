#include "relaxlab/porous_medium.hpp"

#include <cmath>
#include <numbers>

namespace relaxlab {

namespace {

using cplx = std::complex<double>;

void check_pm(const PMState& s, const PhysParams& p) {
  for (double v : s.rho.values()) {
    if (!std::isfinite(v)) throw BlowUpDetected(BlowupTrigger::NonFinite, s.t);
    if (v < p.rho_min() || v > p.rho_max())
      throw BlowUpDetected(BlowupTrigger::Admissibility, s.t);
  }
}

void linear_half(PMState& s, double t0, double t1, const PhysParams& p) {
  const Grid& g = s.rho.grid();
  double pp = p.Pprime_bar();
  double dB = p.B(t1) - p.B(t0);
  auto& c = s.rho.coeffs_mut();
  for (int i = 0; i < g.size_spec(); ++i) {
    double x2 = g.xi_abs(i) * g.xi_abs(i);
    c[i] *= std::exp(-pp * x2 * dB);
  }
}

// remainder N(rho) = P(rho) - P(rho_bar) - P'(rho_bar)(rho - rho_bar),
// rhs(t) = -|xi|^2 b(t) N(rho)^hat, dealiased
std::vector<cplx> remainder_rhs(const Grid& g, const std::vector<cplx>& rc,
                                double t, const PhysParams& p) {
  SpectralField f(g);
  f.coeffs_mut() = rc;
  const auto& rv = f.values();
  double pbar = p.pressure(p.rho_bar), ppb = p.Pprime_bar();
  std::vector<double> nv(g.size_real());
  for (int x = 0; x < g.size_real(); ++x)
    nv[x] = p.pressure(rv[x]) - pbar - ppb * (rv[x] - p.rho_bar);
  std::vector<cplx> out(g.size_spec());
  fft_forward(g, nv.data(), out.data());
  double b = p.b(t);
  for (int i = 0; i < g.size_spec(); ++i) {
    if (!g.dealias_keep(i)) {
      out[i] = 0.0;
      continue;
    }
    double x2 = g.xi_abs(i) * g.xi_abs(i);
    out[i] *= -x2 * b;
  }
  return out;
}

void remainder_flow(PMState& s, double dt, const PhysParams& p) {
  const Grid& g = s.rho.grid();
  int ns = g.size_spec();
  double t = s.t;
  std::vector<cplx> y0 = s.rho.coeffs();

  std::vector<cplx> f1 = remainder_rhs(g, y0, t, p);
  std::vector<cplx> y1(ns);
  for (int i = 0; i < ns; ++i) y1[i] = y0[i] + dt * f1[i];
  std::vector<cplx> f2 = remainder_rhs(g, y1, t + dt, p);
  std::vector<cplx> y2(ns);
  for (int i = 0; i < ns; ++i) y2[i] = 0.75 * y0[i] + 0.25 * (y1[i] + dt * f2[i]);
  std::vector<cplx> f3 = remainder_rhs(g, y2, t + 0.5 * dt, p);
  auto& out = s.rho.coeffs_mut();
  for (int i = 0; i < ns; ++i)
    out[i] = y0[i] / 3.0 + 2.0 / 3.0 * (y2[i] + dt * f3[i]);
}

}  // namespace

double pm_auto_dt(const PMState& s, double T, const PhysParams& p) {
  const Grid& g = s.rho.grid();
  double ximax = g.xi_unit() * (g.n / 3) * (g.dim == 1 ? 1.0 : std::numbers::sqrt2);
  double gmax = 0.0;
  double ppb = p.Pprime_bar();
  for (double v : s.rho.values())
    gmax = std::max(gmax, std::abs(p.pressure_prime(v) - ppb));
  double cap = T / 1e4;
  double rate = p.b(s.t) * gmax * ximax * ximax;
  if (rate <= 0.0) return cap;
  return std::min(1.5 / rate, cap);
}

PMState pm_step(const PMState& s, double dt, const PhysParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("pm_step: dt must be positive");
  PMState out = s;
  linear_half(out, s.t, s.t + 0.5 * dt, p);
  remainder_flow(out, dt, p);
  linear_half(out, s.t + 0.5 * dt, s.t + dt, p);
  out.t = s.t + dt;
  check_pm(out, p);
  return out;
}

PMTrajectory run_porous_medium(const PMState& init, double T, const PhysParams& p,
                               const PMOptions& opt) {
  validate_params(p);
  if (!(T > init.t)) throw std::invalid_argument("run_porous_medium: T must exceed init.t");
  if (opt.snapshots < 2) throw std::invalid_argument("run_porous_medium: snapshots >= 2");
  check_pm(init, p);

  PMTrajectory traj;
  double t_begin = init.t, span = T - t_begin;
  for (int i = 0; i < opt.snapshots; ++i)
    traj.times.push_back(t_begin + span * i / (opt.snapshots - 1));

  PMState cur = init;
  traj.mass0 = cur.rho.mean();
  traj.states.push_back(cur);

  size_t next_snap = 1;
  long since_recompute = 10;
  double dt_base = 0.0;
  while (cur.t < T - 1e-13 * std::max(1.0, T)) {
    switch (opt.dt_policy.kind) {
      case DtPolicy::Kind::Auto:
        if (since_recompute >= 10) {
          dt_base = pm_auto_dt(cur, T, p);
          since_recompute = 0;
        }
        break;
      case DtPolicy::Kind::FixedDt:
        dt_base = opt.dt_policy.dt;
        break;
      case DtPolicy::Kind::FixedSteps:
        dt_base = span / opt.dt_policy.steps;
        break;
    }
    double stop = next_snap < traj.times.size() ? traj.times[next_snap] : T;
    double dt = std::min(dt_base, stop - cur.t);
    if (opt.on_step) opt.on_step(cur, dt);

    cur = pm_step(cur, dt, p);
    ++traj.steps;
    ++since_recompute;

    double mass = cur.rho.mean();
    traj.mass_drift_rel =
        std::max(traj.mass_drift_rel,
                 std::abs(mass - traj.mass0) / std::max(std::abs(traj.mass0), 1e-300));

    if (std::abs(cur.t - stop) < 1e-12 * std::max(1.0, stop)) {
      cur.t = stop;
      if (next_snap < traj.times.size() && stop == traj.times[next_snap]) {
        traj.states.push_back(cur);
        ++next_snap;
      }
    }
  }
  if (opt.on_step) opt.on_step(cur, 0.0);
  return traj;
}

std::vector<SpectralField> darcy_velocity(const PMState& s, const PhysParams& p) {
  const Grid& g = s.rho.grid();
  const auto& rv = s.rho.values();
  SpectralField pf(g);
  {
    auto& pv = pf.values_mut();
    for (int x = 0; x < g.size_real(); ++x) pv[x] = p.pressure(rv[x]);
  }
  double b = p.b(s.t);
  std::vector<SpectralField> out;
  out.reserve(g.dim);
  for (int a = 0; a < g.dim; ++a) {
    SpectralField grad = pf.derivative(a);
    auto& gv = grad.values_mut();
    for (int x = 0; x < g.size_real(); ++x) gv[x] = -b * gv[x] / rv[x];
    out.push_back(std::move(grad));
  }
  return out;
}

}  // namespace relaxlab
