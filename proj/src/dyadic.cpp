#include "relaxlab/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace relaxlab {

namespace {
double gexp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
}  // namespace

double lp_chi(double r) {
  constexpr double lo = 0.75, hi = 4.0 / 3.0;
  if (r <= lo) return 1.0;
  if (r >= hi) return 0.0;
  double a = gexp(hi - r), b = gexp(r - lo);
  return a / (a + b);
}

double lp_phi(double r) { return lp_chi(0.5 * r) - lp_chi(r); }

DyadicLadder::DyadicLadder(const Grid& g) : grid_(g) {
  double ximin = g.xi_unit(), ximax = g.xi_abs_max();
  int lo = static_cast<int>(std::floor(std::log2(ximin))) - 3;
  int hi = static_cast<int>(std::ceil(std::log2(ximax))) + 3;
  jmin_ = jmax_ = 0;
  bool found = false;
  std::vector<std::vector<double>> tabs;
  for (int j = lo; j <= hi; ++j) {
    std::vector<double> tab(g.size_spec());
    double pj = std::exp2(-j);
    bool any = false;
    for (int i = 0; i < g.size_spec(); ++i) {
      tab[i] = lp_phi(pj * g.xi_abs(i));
      if (tab[i] != 0.0) any = true;
    }
    if (!any) {
      if (found) break;
      continue;
    }
    if (!found) jmin_ = j, found = true;
    jmax_ = j;
    tabs.push_back(std::move(tab));
  }
  if (!found) throw std::logic_error("dyadic ladder: no resolved blocks");
  phi_ = std::move(tabs);
}

std::vector<double> DyadicLadder::block_norms(const SpectralField& u) const {
  if (!(u.grid() == grid_)) throw std::invalid_argument("block_norms: grid mismatch");
  const auto& c = u.coeffs();
  double vol = std::pow(grid_.length, grid_.dim);
  std::vector<double> out(n_blocks());
  for (int b = 0; b < n_blocks(); ++b) {
    const auto& tab = phi_[b];
    double s = 0.0;
    for (int i = 0; i < grid_.size_spec(); ++i) {
      if (tab[i] == 0.0) continue;
      s += grid_.herm_weight(i) * tab[i] * tab[i] * std::norm(c[i]);
    }
    out[b] = std::sqrt(vol * s);
  }
  return out;
}

double DyadicLadder::besov(const SpectralField& u, double s) const {
  double c0 = std::abs(u.coeffs()[0]);
  if (c0 > 1e-12 * (1.0 + u.l2_spec())) mean_warnings_.fetch_add(1);
  auto bn = block_norms(u);
  double total = 0.0;
  for (int b = 0; b < n_blocks(); ++b) total += std::exp2(s * (jmin_ + b)) * bn[b];
  return total;
}

SpectralField DyadicLadder::block(const SpectralField& u, int j) const {
  if (!(u.grid() == grid_)) throw std::invalid_argument("block: grid mismatch");
  SpectralField out(grid_);
  auto& oc = out.coeffs_mut();
  if (j < jmin_ || j > jmax_) return out;
  const auto& tab = phi_[j - jmin_];
  const auto& c = u.coeffs();
  for (int i = 0; i < grid_.size_spec(); ++i) oc[i] = tab[i] * c[i];
  return out;
}

SpectralField DyadicLadder::lowpass_below(const SpectralField& u, int J) const {
  if (!(u.grid() == grid_)) throw std::invalid_argument("lowpass: grid mismatch");
  SpectralField out(grid_);
  auto& oc = out.coeffs_mut();
  const auto& c = u.coeffs();
  double scale = std::exp2(-(J + 1));
  for (int i = 0; i < grid_.size_spec(); ++i)
    oc[i] = lp_chi(scale * grid_.xi_abs(i)) * c[i];
  return out;
}

int threshold_J(double t, const PhysParams& p, int k0) {
  if (t < 0.0) throw std::invalid_argument("threshold_J: t must be >= 0");
  double log2_inv_eb = std::log2(p.mu / p.epsilon) - p.lambda * std::log2(1.0 + t);
  return static_cast<int>(std::floor(log2_inv_eb)) - k0;
}

double crossover_time_tj(int j, const PhysParams& p, int k0) {
  if (p.lambda == 0.0)
    throw std::invalid_argument("crossover_time_tj: undefined for lambda = 0");
  double base = p.mu / (p.epsilon * std::exp2(k0 + j));
  return std::max(std::pow(base, 1.0 / p.lambda) - 1.0, 0.0);
}

}  // namespace relaxlab
