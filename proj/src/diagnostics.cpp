#include "relaxlab/diagnostics.hpp"

#include <cmath>

namespace relaxlab {

std::vector<SpectralField> damped_mode(const EulerState& s, const PhysParams& p) {
  double b = p.b(s.t);
  std::vector<SpectralField> z;
  z.reserve(s.u.size());
  for (size_t a = 0; a < s.u.size(); ++a) {
    SpectralField g = s.n.derivative(static_cast<int>(a));
    auto& gc = g.coeffs_mut();
    const auto& uc = s.u[a].coeffs();
    for (size_t i = 0; i < gc.size(); ++i) gc[i] = uc[i] + b * gc[i];
    z.push_back(std::move(g));
  }
  return z;
}

namespace {

// accumulator layout per velocity component count d:
//   0:            n   low  sup   s = d/2
//   1:            n   low  l1    s = d/2+2   (scale b)
//   2:            n   high sup   s = d/2+1   (scale b)
//   3:            n   high l1    s = d/2+1
//   4 + 5c..:     u_c low  sup   s = d/2
//                 u_c low  l1    s = d/2+1
//                 u_c high sup   s = d/2+1   (scale b)
//                 u_c high l1    s = d/2+1
//                 u_c all  l2    s = d/2     (scale 1/sqrt b)
//   4 + 5d + c:   w_c = u_c/b + d_c n, all bands, l1, s = d/2
std::vector<NormAccumulator> make_energy_accs(const DyadicLadder& lad,
                                              const PhysParams& p, int k0) {
  double sd = 0.5 * lad.grid().dim;
  std::vector<NormAccumulator> acc;
  acc.reserve(4 + 6 * lad.grid().dim);
  acc.emplace_back(lad, sd, Band::Low, p, k0);
  acc.emplace_back(lad, sd + 2.0, Band::Low, p, k0);
  acc.emplace_back(lad, sd + 1.0, Band::High, p, k0);
  acc.emplace_back(lad, sd + 1.0, Band::High, p, k0);
  for (int c = 0; c < lad.grid().dim; ++c) {
    acc.emplace_back(lad, sd, Band::Low, p, k0);
    acc.emplace_back(lad, sd + 1.0, Band::Low, p, k0);
    acc.emplace_back(lad, sd + 1.0, Band::High, p, k0);
    acc.emplace_back(lad, sd + 1.0, Band::High, p, k0);
    acc.emplace_back(lad, sd, Band::All, p, k0);
  }
  for (int c = 0; c < lad.grid().dim; ++c) acc.emplace_back(lad, sd, Band::All, p, k0);
  return acc;
}

}  // namespace

EnergyTracker::EnergyTracker(const Grid& g, const PhysParams& p, int k0)
    : ladder_(g), p_(p), k0_(k0), acc_(make_energy_accs(ladder_, p, k0)) {}

void EnergyTracker::observe(const EulerState& s, double dt) {
  int d = s.n.grid().dim;
  double t = s.t, b = p_.b(t), eps = p_.epsilon;

  auto bn_n = ladder_.block_norms(s.n);
  std::vector<std::vector<double>> bn_u(d);
  for (int c = 0; c < d; ++c) bn_u[c] = ladder_.block_norms(s.u[c]);

  if (X0_ < 0.0) {
    if (t != 0.0)
      throw std::logic_error("energy tracker: first sample must be at t = 0");
    // X0 = ||(n0, eps u0)||^l_{B^{d/2}} + eps ||(n0, eps u0)||^h_{B^{d/2+1}}
    int J = threshold_J(0.0, p_, k0_);
    double sd = 0.5 * d;
    double low = 0.0, high = 0.0;
    for (int bidx = 0; bidx < ladder_.n_blocks(); ++bidx) {
      int j = ladder_.j_min() + bidx;
      double combo = bn_n[bidx];
      for (int c = 0; c < d; ++c) combo += eps * bn_u[c][bidx];
      if (j <= J)
        low += std::exp2(sd * j) * combo;
      else
        high += std::exp2((sd + 1.0) * j) * combo;
    }
    X0_ = low + eps * high;
  }

  acc_[0].accumulate(bn_n, t, dt);
  acc_[1].accumulate(bn_n, t, dt, b);
  acc_[2].accumulate(bn_n, t, dt, b);
  acc_[3].accumulate(bn_n, t, dt);
  for (int c = 0; c < d; ++c) {
    acc_[4 + 5 * c + 0].accumulate(bn_u[c], t, dt);
    acc_[4 + 5 * c + 1].accumulate(bn_u[c], t, dt);
    acc_[4 + 5 * c + 2].accumulate(bn_u[c], t, dt, b);
    acc_[4 + 5 * c + 3].accumulate(bn_u[c], t, dt);
    acc_[4 + 5 * c + 4].accumulate(bn_u[c], t, dt, 1.0 / std::sqrt(b));
  }
  for (int c = 0; c < d; ++c) {
    SpectralField w = s.n.derivative(c);
    auto& wc = w.coeffs_mut();
    const auto& uc = s.u[c].coeffs();
    for (size_t i = 0; i < wc.size(); ++i) wc[i] += uc[i] / b;
    acc_[4 + 5 * d + c].accumulate(ladder_.block_norms(w), t, dt);
  }
}

EnergyReport EnergyTracker::report() const {
  if (X0_ < 0.0) throw std::logic_error("energy tracker: no samples");
  int d = ladder_.grid().dim;
  double eps = p_.epsilon;
  EnergyReport r;
  r.lf_sup_n_eu = acc_[0].sup_norm();
  r.lf_l1_bn = acc_[1].l1_norm();
  r.hf_sup = eps * acc_[2].sup_norm();
  r.hf_l1 = acc_[3].l1_norm() / eps;
  for (int c = 0; c < d; ++c) {
    r.lf_sup_n_eu += eps * acc_[4 + 5 * c + 0].sup_norm();
    r.lf_l1_u += acc_[4 + 5 * c + 1].l1_norm();
    r.hf_sup += eps * eps * acc_[4 + 5 * c + 2].sup_norm();
    r.hf_l1 += acc_[4 + 5 * c + 3].l1_norm();  // eps * (1/eps) cancels
    r.l2_bu += acc_[4 + 5 * c + 4].l2_norm();
    r.l1_damped_mode += acc_[4 + 5 * d + c].l1_norm() / eps;
  }
  r.total = r.lf_sup_n_eu + r.lf_l1_bn + r.lf_l1_u + r.hf_sup + r.hf_l1 + r.l2_bu +
            r.l1_damped_mode;
  r.X0 = X0_;
  r.ratio = X0_ > 0.0 ? r.total / X0_ : 0.0;
  return r;
}

ErrorTracker::ErrorTracker(const Grid& g, const PhysParams& p, int k0)
    : ladder_(g), p_(p) {
  double sd = 0.5 * g.dim;
  acc_.reserve(3);
  acc_.emplace_back(ladder_, sd - 1.0, Band::All, p, k0);  // density sup
  acc_.emplace_back(ladder_, sd + 1.0, Band::All, p, k0);  // density l1
  acc_.emplace_back(ladder_, sd, Band::All, p, k0);        // velocity l1
}

void ErrorTracker::observe(const EulerState& e, const PMState& m, double dt) {
  if (std::abs(e.t - m.t) > 1e-10 * (1.0 + std::abs(e.t)))
    throw std::invalid_argument("error tracker: trajectory times differ");
  const Grid& g = ladder_.grid();
  double tau = e.t, lam = p_.lambda;

  SpectralField drho(g);
  {
    auto& dv = drho.values_mut();
    const auto& nv = e.n.values();
    const auto& rv = m.rho.values();
    for (int x = 0; x < g.size_real(); ++x) dv[x] = p_.rho_of_n(nv[x]) - rv[x];
  }
  auto bn_rho = ladder_.block_norms(drho);

  std::vector<SpectralField> ustar = darcy_velocity(m, p_);
  std::vector<double> bn_vel(ladder_.n_blocks(), 0.0);
  for (int c = 0; c < g.dim; ++c) {
    SpectralField du(g);
    auto& dc = du.coeffs_mut();
    const auto& a = e.u[c].coeffs();
    const auto& b = ustar[c].coeffs();
    for (int i = 0; i < g.size_spec(); ++i) dc[i] = a[i] - b[i];
    auto bn = ladder_.block_norms(du);
    for (size_t i = 0; i < bn.size(); ++i) bn_vel[i] += bn[i];
  }

  double w_dec = std::pow(1.0 + tau, -lam);  // (1+tau)^{-lambda}
  double w_inc = std::pow(1.0 + tau, lam);   // (1+tau)^{lambda}
  if (lam > 0.0) {
    acc_[0].accumulate(bn_rho, tau, dt, w_dec);
    acc_[1].accumulate(bn_rho, tau, dt);
    acc_[2].accumulate(bn_vel, tau, dt, w_dec);
  } else {
    acc_[0].accumulate(bn_rho, tau, dt);
    acc_[1].accumulate(bn_rho, tau, dt, w_inc);
    acc_[2].accumulate(bn_vel, tau, dt);
  }
}

ErrorReport ErrorTracker::report() const {
  ErrorReport r;
  r.epsilon = p_.epsilon;
  r.weighted = p_.lambda > 0.0;
  r.sup_err = acc_[0].sup_norm();
  r.l1_high_err = acc_[1].l1_norm();
  r.l1_vel_err = acc_[2].l1_norm();
  r.total = r.sup_err + r.l1_high_err + r.l1_vel_err;
  return r;
}

ErrorReport error_norms(const EulerTrajectory& te, const PMTrajectory& tm,
                        const PhysParams& p, int k0) {
  if (te.times.size() != tm.times.size() || te.times.empty())
    throw std::invalid_argument("error_norms: snapshot grids differ");
  for (size_t i = 0; i < te.times.size(); ++i)
    if (std::abs(te.times[i] - tm.times[i]) > 1e-10 * (1.0 + std::abs(te.times[i])))
      throw std::invalid_argument("error_norms: snapshot grids differ");
  if (!(te.states[0].n.grid() == tm.states[0].rho.grid()))
    throw std::invalid_argument("error_norms: field grids differ");

  ErrorTracker tracker(te.states[0].n.grid(), p, k0);
  for (size_t i = 0; i < te.times.size(); ++i) {
    double dt = i + 1 < te.times.size() ? te.times[i + 1] - te.times[i] : 0.0;
    tracker.observe(te.states[i], tm.states[i], dt);
  }
  return tracker.report();
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw std::invalid_argument("fit_rate: need >= 3 pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [e, v] : pairs) {
    if (!(e > 0.0) || !(v > 0.0))
      throw std::invalid_argument("fit_rate: inputs must be positive");
    double x = std::log(e), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(pairs.size());
  double denom = n * sxx - sx * sx;
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (auto [e, v] : pairs) {
    double r = std::log(v) - (fit.slope * std::log(e) + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace relaxlab
