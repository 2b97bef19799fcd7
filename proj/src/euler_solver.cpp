#include "relaxlab/euler_solver.hpp"

#include <cmath>
#include <unordered_map>

namespace relaxlab {

namespace {

using cplx = std::complex<double>;

bool any_nyquist(const Grid& g, int idx) {
  for (int a = 0; a < g.dim; ++a)
    if (std::abs(g.k_component(idx, a)) == g.n / 2) return true;
  return false;
}

// Stiff half-step over [t0, t1]: per mode, the compressible pair (n, m) goes
// through the fundamental matrix, the incompressible rest decays exactly.
// Nyquist rows have no sign partner for odd-derivative coupling and are
// treated as pure damping (consistent with the derivative convention).
void stiff_flow(EulerState& s, double t0, double t1, const PhysParams& p,
                const EulerOptions& opt) {
  const Grid& g = s.n.grid();
  int d = g.dim;
  double eps = p.epsilon;
  double decay = std::exp(-(p.Binv(t1) - p.Binv(t0)) / (eps * eps));

  auto& nc = s.n.coeffs_mut();
  std::vector<cplx>* uc[2] = {nullptr, nullptr};
  for (int a = 0; a < d; ++a) uc[a] = &s.u[a].coeffs_mut();

  std::unordered_map<double, Mat2> cache;
  for (int i = 0; i < g.size_spec(); ++i) {
    double xim = g.xi_abs(i);
    if (xim == 0.0 || any_nyquist(g, i)) {
      for (int a = 0; a < d; ++a) (*uc[a])[i] *= decay;
      continue;
    }
    Mat2 f;
    auto it = cache.find(xim);
    if (it != cache.end()) {
      f = it->second;
    } else {
      f = fundamental_nm(xim, t0, t1, p, opt.rtol, opt.atol);
      cache.emplace(xim, f);
    }

    double xix = g.xi_component(i, 0);
    double xiy = d == 2 ? g.xi_component(i, 1) : 0.0;
    cplx ux = (*uc[0])[i];
    cplx uy = d == 2 ? (*uc[1])[i] : cplx(0.0, 0.0);
    cplx w = cplx(0.0, 1.0) * (xix * ux + xiy * uy);  // div u mode
    cplx m = eps * w / xim;
    cplx n1 = f.a11 * nc[i] + f.a12 * m;
    cplx m1 = f.a21 * nc[i] + f.a22 * m;
    cplx w1 = xim * m1 / eps;
    nc[i] = n1;
    if (d == 1) {
      (*uc[0])[i] = w1 / (cplx(0.0, 1.0) * xix);
    } else {
      cplx tau = cplx(0.0, 1.0) * (-xiy * ux + xix * uy);  // curl mode
      tau *= decay;
      double x2 = xim * xim;
      (*uc[0])[i] = cplx(0.0, -1.0) * (xix * w1 - xiy * tau) / x2;
      (*uc[1])[i] = cplx(0.0, -1.0) * (xiy * w1 + xix * tau) / x2;
    }
  }
}

struct SpecVecs {
  std::vector<cplx> n;
  std::vector<cplx> u[2];
};

SpecVecs residual_rhs(const Grid& g, const std::vector<cplx>& nc,
                      const std::vector<cplx>* ucx, const std::vector<cplx>* ucy,
                      const PhysParams& p) {
  int d = g.dim;
  int nr = g.size_real(), ns = g.size_spec();

  SpectralField nf(g);
  nf.coeffs_mut() = nc;
  std::vector<SpectralField> uf;
  uf.reserve(2);
  uf.emplace_back(g).coeffs_mut() = *ucx;
  if (d == 2) uf.emplace_back(g).coeffs_mut() = *ucy;

  // real-space ingredients: n, u_i, grad n, grad u_i
  const auto& nv = nf.values();
  std::vector<const std::vector<double>*> uv(d);
  for (int a = 0; a < d; ++a) uv[a] = &uf[a].values();
  std::vector<std::vector<double>> dn(d);
  std::vector<std::vector<double>> du(d * d);  // du[i*d+j] = d_j u_i
  for (int j = 0; j < d; ++j) dn[j] = nf.derivative(j).values();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) du[i * d + j] = uf[i].derivative(j).values();

  std::vector<double> rn(nr);
  std::vector<std::vector<double>> ru(d, std::vector<double>(nr));
  for (int x = 0; x < nr; ++x) {
    double divu = 0.0;
    for (int i = 0; i < d; ++i) divu += du[i * d + i][x];
    double adv_n = 0.0;
    for (int j = 0; j < d; ++j) adv_n += (*uv[j])[x] * dn[j][x];
    rn[x] = -adv_n - p.G(nv[x]) * divu;
    for (int i = 0; i < d; ++i) {
      double adv = 0.0;
      for (int j = 0; j < d; ++j) adv += (*uv[j])[x] * du[i * d + j][x];
      ru[i][x] = -adv;
    }
  }

  SpecVecs out;
  out.n.resize(ns);
  fft_forward(g, rn.data(), out.n.data());
  for (int a = 0; a < d; ++a) {
    out.u[a].resize(ns);
    fft_forward(g, ru[a].data(), out.u[a].data());
  }
  for (int i = 0; i < ns; ++i)
    if (!g.dealias_keep(i)) {
      out.n[i] = 0.0;
      for (int a = 0; a < d; ++a) out.u[a][i] = 0.0;
    }
  return out;
}

// classic Shu-Osher three-stage SSP-RK3 on the dealiased residual
void explicit_flow(EulerState& s, double dt, const PhysParams& p) {
  const Grid& g = s.n.grid();
  int d = g.dim, ns = g.size_spec();
  std::vector<cplx> n0 = s.n.coeffs();
  std::vector<cplx> u0[2];
  for (int a = 0; a < d; ++a) u0[a] = s.u[a].coeffs();

  // stage 1
  SpecVecs f1 = residual_rhs(g, n0, &u0[0], d == 2 ? &u0[1] : nullptr, p);
  std::vector<cplx> n1(ns);
  std::vector<cplx> u1[2];
  for (int i = 0; i < ns; ++i) n1[i] = n0[i] + dt * f1.n[i];
  for (int a = 0; a < d; ++a) {
    u1[a].resize(ns);
    for (int i = 0; i < ns; ++i) u1[a][i] = u0[a][i] + dt * f1.u[a][i];
  }
  // stage 2
  SpecVecs f2 = residual_rhs(g, n1, &u1[0], d == 2 ? &u1[1] : nullptr, p);
  std::vector<cplx> n2(ns);
  std::vector<cplx> u2[2];
  for (int i = 0; i < ns; ++i) n2[i] = 0.75 * n0[i] + 0.25 * (n1[i] + dt * f2.n[i]);
  for (int a = 0; a < d; ++a) {
    u2[a].resize(ns);
    for (int i = 0; i < ns; ++i)
      u2[a][i] = 0.75 * u0[a][i] + 0.25 * (u1[a][i] + dt * f2.u[a][i]);
  }
  // stage 3
  SpecVecs f3 = residual_rhs(g, n2, &u2[0], d == 2 ? &u2[1] : nullptr, p);
  auto& nout = s.n.coeffs_mut();
  for (int i = 0; i < ns; ++i)
    nout[i] = n0[i] / 3.0 + 2.0 / 3.0 * (n2[i] + dt * f3.n[i]);
  for (int a = 0; a < d; ++a) {
    auto& uo = s.u[a].coeffs_mut();
    for (int i = 0; i < ns; ++i)
      uo[i] = u0[a][i] / 3.0 + 2.0 / 3.0 * (u2[a][i] + dt * f3.u[a][i]);
  }
}

void check_state(const EulerState& s, const PhysParams& p, double t_report) {
  const auto& nv = s.n.values();
  for (double v : nv)
    if (!std::isfinite(v)) throw BlowUpDetected(BlowupTrigger::NonFinite, t_report);
  for (const auto& u : s.u)
    for (double v : u.values())
      if (!std::isfinite(v)) throw BlowUpDetected(BlowupTrigger::NonFinite, t_report);
  double nlo = p.n_of_rho(p.rho_min()), nhi = p.n_of_rho(p.rho_max());
  for (double v : nv)
    if (v < nlo || v > nhi)
      throw BlowUpDetected(BlowupTrigger::Admissibility, t_report);
}

}  // namespace

std::string to_string(BlowupTrigger tr) {
  switch (tr) {
    case BlowupTrigger::GradientCap: return "gradient-cap";
    case BlowupTrigger::GradientBudget: return "gradient-budget";
    case BlowupTrigger::Admissibility: return "admissibility";
    case BlowupTrigger::NonFinite: return "nan";
  }
  return "unknown";
}

DtPolicy DtPolicy::fixed_dt(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt_policy: dt must be positive");
  DtPolicy p;
  p.kind = Kind::FixedDt;
  p.dt = dt;
  return p;
}

DtPolicy DtPolicy::fixed_steps(long n) {
  if (n < 1) throw std::invalid_argument("dt_policy: steps must be >= 1");
  DtPolicy p;
  p.kind = Kind::FixedSteps;
  p.steps = n;
  return p;
}

std::optional<BlowupTrigger> BlowupMonitor::observe(const EulerState& s,
                                                    const PhysParams& p, double dt) {
  (void)p;
  double gmax = 0.0;
  bool finite = true;
  for (int a = 0; a < s.n.grid().dim; ++a) {
    double gn = s.n.derivative(a).linf();
    if (!std::isfinite(gn)) finite = false;
    gmax = std::max(gmax, gn);
    for (const auto& u : s.u) {
      double gu = u.derivative(a).linf();
      if (!std::isfinite(gu)) finite = false;
      gmax = std::max(gmax, gu);
    }
  }
  if (!finite) return BlowupTrigger::NonFinite;
  last_ = gmax;
  if (initial_ < 0.0) initial_ = gmax;
  integral_ += dt * gmax;
  if (initial_ > 0.0 && gmax > caps_.cap_factor * initial_)
    return BlowupTrigger::GradientCap;
  if (integral_ > caps_.integral_budget) return BlowupTrigger::GradientBudget;
  return std::nullopt;
}

double euler_mass(const EulerState& s, const PhysParams& p) {
  const auto& nv = s.n.values();
  double acc = 0.0;
  for (double v : nv) acc += p.rho_of_n(v);
  return acc / static_cast<double>(nv.size());
}

double euler_auto_dt(const EulerState& s, double T, const PhysParams& p,
                     bool nonlinear) {
  double umax = 0.0;
  for (const auto& u : s.u) umax = std::max(umax, u.linf());
  double cfast = nonlinear ? std::sqrt(2.0 * p.Pprime_bar()) / p.epsilon : 0.0;
  double speed = umax + cfast;
  double cap = T / 1e4;
  if (speed <= 0.0) return cap;
  return std::min(0.4 * s.n.grid().dx() / speed, cap);
}

EulerState euler_step(const EulerState& s, double dt, const PhysParams& p,
                      const EulerOptions& opt) {
  if (!(dt > 0.0)) throw std::invalid_argument("euler_step: dt must be positive");
  EulerState out = s;
  double t0 = s.t, tm = s.t + 0.5 * dt, t1 = s.t + dt;
  stiff_flow(out, t0, tm, p, opt);
  if (opt.nonlinear) explicit_flow(out, dt, p);
  stiff_flow(out, tm, t1, p, opt);
  out.t = t1;
  check_state(out, p, t1);
  return out;
}

EulerTrajectory run_euler(const EulerState& init, double T, const PhysParams& p,
                          const EulerOptions& opt) {
  validate_params(p);
  if (!(T > init.t)) throw std::invalid_argument("run_euler: T must exceed init.t");
  if (opt.snapshots < 2) throw std::invalid_argument("run_euler: snapshots >= 2");
  check_state(init, p, init.t);

  EulerTrajectory traj;
  traj.times.reserve(opt.snapshots);
  double t_begin = init.t;
  double span = T - t_begin;
  for (int i = 0; i < opt.snapshots; ++i)
    traj.times.push_back(t_begin + span * i / (opt.snapshots - 1));

  EulerState cur = init;
  traj.mass0 = euler_mass(cur, p);
  traj.states.push_back(cur);
  BlowupMonitor monitor(opt.caps);

  size_t next_snap = 1;
  long since_recompute = 10;
  double dt_base = 0.0;
  while (cur.t < T - 1e-13 * std::max(1.0, T)) {
    switch (opt.dt_policy.kind) {
      case DtPolicy::Kind::Auto:
        if (since_recompute >= 10) {
          dt_base = euler_auto_dt(cur, T, p, opt.nonlinear);
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

    if (auto tr = monitor.observe(cur, p, dt)) throw BlowUpDetected(*tr, cur.t);
    if (opt.on_step) opt.on_step(cur, dt);

    cur = euler_step(cur, dt, p, opt);
    ++traj.steps;
    ++since_recompute;

    double mass = euler_mass(cur, p);
    traj.mass_drift_rel = std::max(
        traj.mass_drift_rel, std::abs(mass - traj.mass0) /
                                 std::max(std::abs(traj.mass0), 1e-300));

    if (std::abs(cur.t - stop) < 1e-12 * std::max(1.0, stop)) {
      cur.t = stop;  // land exactly on the snapshot grid
      if (next_snap < traj.times.size() && stop == traj.times[next_snap]) {
        traj.states.push_back(cur);
        ++next_snap;
      }
    }
  }
  if (auto tr = monitor.observe(cur, p, 0.0)) throw BlowUpDetected(*tr, cur.t);
  if (opt.on_step) opt.on_step(cur, 0.0);
  return traj;
}

}  // namespace relaxlab
