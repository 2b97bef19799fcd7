#include "relaxlab/linear_lab.hpp"

#include <cmath>

#include "relaxlab/dyadic.hpp"

namespace relaxlab {

namespace {

template <size_t N>
using Vec = std::array<double, N>;

// Dormand-Prince 5(4) with PI-free standard step control.  States are tiny
// fixed arrays; this is the whole stiff-kernel workhorse, so it stays local.
template <size_t N, class F>
Vec<N> rk45(F&& rhs, Vec<N> y, double t0, double t1, double rtol, double atol) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  double span = t1 - t0;
  if (!(span > 0.0)) return y;
  double t = t0, h = span / 64.0;
  long iter = 0;
  while (t < t1) {
    if (++iter > 4000000) throw ToleranceError("rk45: step budget exhausted");
    h = std::min(h, t1 - t);
    if (h < 1e-14 * span) throw ToleranceError("rk45: step size underflow");

    Vec<N> k1 = rhs(t, y), ytmp;
    for (size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    Vec<N> k2 = rhs(t + c2 * h, ytmp);
    for (size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    Vec<N> k3 = rhs(t + c3 * h, ytmp);
    for (size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    Vec<N> k4 = rhs(t + c4 * h, ytmp);
    for (size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    Vec<N> k5 = rhs(t + c5 * h, ytmp);
    for (size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
    Vec<N> k6 = rhs(t + h, ytmp);
    Vec<N> ynew;
    for (size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    Vec<N> k7 = rhs(t + h, ynew);

    double err = 0.0;
    for (size_t i = 0; i < N; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                      e6 * k6[i] + e7 * k7[i]);
      double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / N);

    if (err <= 1.0) {
      t += h;
      y = ynew;
    }
    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::min(5.0, std::max(0.2, fac));
  }
  return y;
}

}  // namespace

std::pair<std::complex<double>, std::complex<double>> eigenvalues(double xi_mag,
                                                                  double t,
                                                                  const PhysParams& p) {
  double b = p.b(t), e = p.epsilon;
  double re = -1.0 / (2.0 * e * e * b);
  double disc = 1.0 / (e * e * b * b) - 4.0 * p.Pprime_bar() * xi_mag * xi_mag;
  if (disc >= 0.0) {
    double r = std::sqrt(disc) / (2.0 * e);
    // re + r cancels when xi is small; recover the small root from the exact
    // product lambda_+ lambda_- = P' |xi|^2 / eps^2 instead
    double lm = re - r;
    double lp = p.Pprime_bar() * xi_mag * xi_mag / (e * e * lm);
    return {std::complex<double>(lp, 0.0), std::complex<double>(lm, 0.0)};
  }
  double im = std::sqrt(-disc) / (2.0 * e);
  return {std::complex<double>(re, im), std::complex<double>(re, -im)};
}

FreqBand classify_frequency(double xi_mag, double t, const PhysParams& p, int k0) {
  if (xi_mag <= 0.0) return FreqBand::Low;
  int j = static_cast<int>(std::floor(std::log2(xi_mag)));
  return j <= threshold_J(t, p, k0) ? FreqBand::Low : FreqBand::High;
}

Mat2 fundamental_nm(double xi_mag, double t0, double t1, const PhysParams& p,
                    double rtol, double atol) {
  if (!(t1 > t0) || t0 < 0.0)
    throw std::invalid_argument("fundamental_nm: need t1 > t0 >= 0");
  double e2 = p.epsilon * p.epsilon;
  if (xi_mag == 0.0) {
    Mat2 m;
    m.a22 = std::exp(-(p.Binv(t1) - p.Binv(t0)) / e2);
    return m;
  }
  double c12 = p.Pprime_bar() * xi_mag / p.epsilon;
  double c21 = xi_mag / p.epsilon;
  auto rhs = [&](double t, const Vec<4>& y) -> Vec<4> {
    double d = 1.0 / (e2 * p.b(t));
    // y = (phi11, phi21, phi12, phi22), columns of the fundamental matrix
    return {-c12 * y[1], c21 * y[0] - d * y[1], -c12 * y[3], c21 * y[2] - d * y[3]};
  };
  Vec<4> y = rk45<4>(rhs, {1.0, 0.0, 0.0, 1.0}, t0, t1, rtol, atol);
  return {y[0], y[2], y[1], y[3]};
}

ModeState propagate_mode(const ModeState& ms, const std::array<double, 2>& xi,
                         double t0, double t1, const PhysParams& p, double rtol,
                         double atol) {
  if (!(t1 > t0) || t0 < 0.0)
    throw std::invalid_argument("propagate_mode: need t1 > t0 >= 0");
  double xi_mag = std::hypot(xi[0], xi[1]);
  Mat2 f = fundamental_nm(xi_mag, t0, t1, p, rtol, atol);
  ModeState out;
  out.n_hat = f.a11 * ms.n_hat + f.a12 * ms.m_hat;
  out.m_hat = f.a21 * ms.n_hat + f.a22 * ms.m_hat;
  double decay = std::exp(-(p.Binv(t1) - p.Binv(t0)) / (p.epsilon * p.epsilon));
  out.omega_hat.reserve(ms.omega_hat.size());
  for (auto w : ms.omega_hat) out.omega_hat.push_back(w * decay);
  return out;
}

FieldTrajectory solve_damped_wave(const SpectralField& n0, const SpectralField& n0_t,
                                  double T, const PhysParams& p, int snapshots,
                                  double rtol, double atol) {
  if (!(T > 0.0)) throw std::invalid_argument("solve_damped_wave: T must be positive");
  if (snapshots < 2) throw std::invalid_argument("solve_damped_wave: need >= 2 snapshots");
  if (!(n0.grid() == n0_t.grid()))
    throw std::invalid_argument("solve_damped_wave: grid mismatch");

  const Grid& g = n0.grid();
  double pp = p.Pprime_bar();
  FieldTrajectory traj;
  traj.times.resize(snapshots);
  for (int s = 0; s < snapshots; ++s) traj.times[s] = T * s / (snapshots - 1);
  std::vector<std::vector<std::complex<double>>> snap(
      snapshots, std::vector<std::complex<double>>(g.size_spec()));

  const auto& c0 = n0.coeffs();
  const auto& c1 = n0_t.coeffs();
  for (int i = 0; i < g.size_spec(); ++i) {
    double xi2 = g.xi_abs(i) * g.xi_abs(i);
    auto rhs = [&](double t, const Vec<4>& y) -> Vec<4> {
      double ib = 1.0 / p.b(t);
      // y = (Re n, Im n, Re n', Im n')
      return {y[2], y[3], -pp * xi2 * y[0] - ib * y[2], -pp * xi2 * y[1] - ib * y[3]};
    };
    Vec<4> y = {c0[i].real(), c0[i].imag(), c1[i].real(), c1[i].imag()};
    snap[0][i] = c0[i];
    for (int s = 1; s < snapshots; ++s) {
      y = rk45<4>(rhs, y, traj.times[s - 1], traj.times[s], rtol, atol);
      snap[s][i] = {y[0], y[1]};
    }
  }
  traj.fields.reserve(snapshots);
  for (int s = 0; s < snapshots; ++s) {
    SpectralField f(g);
    f.coeffs_mut() = std::move(snap[s]);
    traj.fields.push_back(std::move(f));
  }
  return traj;
}

FieldTrajectory solve_heat_timedep(const SpectralField& n0, double T,
                                   const PhysParams& p, int snapshots) {
  if (!(T > 0.0)) throw std::invalid_argument("solve_heat_timedep: T must be positive");
  if (snapshots < 2)
    throw std::invalid_argument("solve_heat_timedep: need >= 2 snapshots");
  const Grid& g = n0.grid();
  double pp = p.Pprime_bar();
  FieldTrajectory traj;
  traj.times.resize(snapshots);
  const auto& c0 = n0.coeffs();
  for (int s = 0; s < snapshots; ++s) {
    traj.times[s] = T * s / (snapshots - 1);
    double B = p.B(traj.times[s]);
    SpectralField f(g);
    auto& c = f.coeffs_mut();
    for (int i = 0; i < g.size_spec(); ++i) {
      double xi2 = g.xi_abs(i) * g.xi_abs(i);
      c[i] = c0[i] * std::exp(-pp * xi2 * B);
    }
    traj.fields.push_back(std::move(f));
  }
  return traj;
}

double diffusion_gap(const FieldTrajectory& wave, const FieldTrajectory& heat,
                     double t) {
  if (wave.times.size() != heat.times.size())
    throw std::invalid_argument("diffusion_gap: snapshot grids differ");
  for (size_t s = 0; s < wave.times.size(); ++s)
    if (std::abs(wave.times[s] - heat.times[s]) > 1e-12 * (1.0 + std::abs(heat.times[s])))
      throw std::invalid_argument("diffusion_gap: snapshot grids differ");
  size_t at = wave.times.size();
  for (size_t s = 0; s < wave.times.size(); ++s)
    if (std::abs(wave.times[s] - t) <= 1e-9 * std::max(1.0, wave.times.back())) {
      at = s;
      break;
    }
  if (at == wave.times.size())
    throw std::invalid_argument("diffusion_gap: time not on snapshot grid");
  if (!(wave.fields[at].grid() == heat.fields[at].grid()))
    throw std::invalid_argument("diffusion_gap: field grids differ");

  SpectralField diff(wave.fields[at].grid());
  auto& dc = diff.coeffs_mut();
  const auto& wc = wave.fields[at].coeffs();
  const auto& hc = heat.fields[at].coeffs();
  for (size_t i = 0; i < dc.size(); ++i) dc[i] = wc[i] - hc[i];
  return diff.l2_spec() / std::max(heat.fields[at].l2_spec(), 1e-14);
}

}  // namespace relaxlab
