#include "relaxlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace relaxlab {

Grid::Grid(int dim_, int n_, double length_) : dim(dim_), n(n_), length(length_) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument("grid: n must be a power of two >= 8");
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("grid: length must be positive");
}

double Grid::xi_unit() const { return 2.0 * std::numbers::pi / length; }

int Grid::k_component(int idx, int axis) const {
  if (dim == 1) return idx;  // half spectrum, k >= 0
  int kx = idx / (n / 2 + 1), ky = idx % (n / 2 + 1);
  int k = axis == 0 ? kx : ky;
  return (axis == 0 && k > n / 2) ? k - n : k;
}

double Grid::xi_component(int idx, int axis) const {
  return xi_unit() * k_component(idx, axis);
}

double Grid::xi_abs(int idx) const {
  if (dim == 1) return xi_unit() * idx;
  double kx = k_component(idx, 0), ky = k_component(idx, 1);
  return xi_unit() * std::sqrt(kx * kx + ky * ky);
}

double Grid::herm_weight(int idx) const {
  // last axis is halved by r2c; rows ky in {0, n/2} store their own conjugates
  int klast = dim == 1 ? idx : idx % (n / 2 + 1);
  return (klast == 0 || klast == n / 2) ? 1.0 : 2.0;
}

bool Grid::dealias_keep(int idx) const {
  int cut = n / 3;
  for (int a = 0; a < dim; ++a)
    if (std::abs(k_component(idx, a)) > cut) return false;
  return true;
}

double Grid::xi_abs_max() const {
  return xi_unit() * (n / 2) * (dim == 1 ? 1.0 : std::numbers::sqrt2);
}

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr, bwd = nullptr;
};

// Plans are created once per (dim, n) with FFTW_ESTIMATE | FFTW_UNALIGNED so
// they are deterministic and reusable on any buffers via the new-array API.
PlanPair& plans_for(const Grid& g) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(g.dim, g.n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<double> vr(g.size_real());
  std::vector<std::complex<double>> vc(g.size_spec());
  auto* cc = reinterpret_cast<fftw_complex*>(vc.data());
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  if (g.dim == 1) {
    p.fwd = fftw_plan_dft_r2c_1d(g.n, vr.data(), cc, flags);
    p.bwd = fftw_plan_dft_c2r_1d(g.n, cc, vr.data(), flags);
  } else {
    p.fwd = fftw_plan_dft_r2c_2d(g.n, g.n, vr.data(), cc, flags);
    p.bwd = fftw_plan_dft_c2r_2d(g.n, g.n, cc, vr.data(), flags);
  }
  if (!p.fwd || !p.bwd) throw std::runtime_error("fftw plan creation failed");
  return cache.emplace(key, p).first->second;
}

}  // namespace

void fft_forward(const Grid& g, const double* vals, std::complex<double>* coef) {
  PlanPair& p = plans_for(g);
  std::vector<double> scratch(vals, vals + g.size_real());
  fftw_execute_dft_r2c(p.fwd, scratch.data(), reinterpret_cast<fftw_complex*>(coef));
  double inv = 1.0 / g.size_real();
  for (int i = 0; i < g.size_spec(); ++i) coef[i] *= inv;
}

void fft_backward(const Grid& g, const std::complex<double>* coef, double* vals) {
  PlanPair& p = plans_for(g);
  // c2r overwrites its input, so transform a copy
  std::vector<std::complex<double>> scratch(coef, coef + g.size_spec());
  fftw_execute_dft_c2r(p.bwd, reinterpret_cast<fftw_complex*>(scratch.data()), vals);
}

SpectralField::SpectralField(const Grid& g)
    : grid_(g), vals_(g.size_real(), 0.0), coef_(g.size_spec(), 0.0) {}

void SpectralField::sync_vals() const {
  if (vals_ok_) return;
  fft_backward(grid_, coef_.data(), vals_.data());
  vals_ok_ = true;
}

void SpectralField::sync_coef() const {
  if (coef_ok_) return;
  fft_forward(grid_, vals_.data(), coef_.data());
  coef_ok_ = true;
}

const std::vector<double>& SpectralField::values() const {
  sync_vals();
  return vals_;
}

const std::vector<std::complex<double>>& SpectralField::coeffs() const {
  sync_coef();
  return coef_;
}

std::vector<double>& SpectralField::values_mut() {
  sync_vals();
  coef_ok_ = false;
  return vals_;
}

std::vector<std::complex<double>>& SpectralField::coeffs_mut() {
  sync_coef();
  vals_ok_ = false;
  return coef_;
}

double SpectralField::mean() const { return coeffs()[0].real(); }

double SpectralField::linf() const {
  double m = 0.0;
  for (double v : values()) {
    if (!std::isfinite(v)) return std::abs(v);  // std::max would swallow NaN
    m = std::max(m, std::abs(v));
  }
  return m;
}

double SpectralField::l2_phys() const {
  double s = 0.0;
  for (double v : values()) s += v * v;
  double cell = std::pow(grid_.dx(), grid_.dim);
  return std::sqrt(cell * s);
}

double SpectralField::l2_spec() const {
  const auto& c = coeffs();
  double s = 0.0;
  for (int i = 0; i < grid_.size_spec(); ++i)
    s += grid_.herm_weight(i) * std::norm(c[i]);
  return std::pow(grid_.length, grid_.dim * 0.5) * std::sqrt(s);
}

void SpectralField::subtract_mean() { coeffs_mut()[0] = 0.0; }

SpectralField SpectralField::derivative(int axis) const {
  SpectralField out(grid_);
  const auto& c = coeffs();
  auto& oc = out.coeffs_mut();
  int half = grid_.n / 2;
  for (int i = 0; i < grid_.size_spec(); ++i) {
    // Nyquist rows carry no usable sign information for odd derivatives
    bool nyq = false;
    for (int a = 0; a < grid_.dim; ++a)
      if (std::abs(grid_.k_component(i, a)) == half) nyq = true;
    oc[i] = nyq ? 0.0 : std::complex<double>(0.0, grid_.xi_component(i, axis)) * c[i];
  }
  return out;
}

void SpectralField::dealias() {
  auto& c = coeffs_mut();
  for (int i = 0; i < grid_.size_spec(); ++i)
    if (!grid_.dealias_keep(i)) c[i] = 0.0;
}

}  // namespace relaxlab
