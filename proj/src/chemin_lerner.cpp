#include "relaxlab/chemin_lerner.hpp"

#include <cmath>
#include <stdexcept>

namespace relaxlab {

NormAccumulator::NormAccumulator(const DyadicLadder& ladder, double s, Band band,
                                 const PhysParams& p, int k0)
    : ladder_(&ladder),
      s_(s),
      band_(band),
      params_(p),
      k0_(k0),
      sup_(ladder.n_blocks(), 0.0),
      l1_(ladder.n_blocks(), 0.0),
      l2sq_(ladder.n_blocks(), 0.0) {}

void NormAccumulator::accumulate(const std::vector<double>& block_norms, double t,
                                 double dt, double scale) {
  if (block_norms.size() != sup_.size())
    throw std::invalid_argument("accumulate: block count mismatch");
  if (!(t > last_t_)) throw std::logic_error("accumulate: sample times must increase");
  if (dt < 0.0) throw std::invalid_argument("accumulate: negative weight");
  last_t_ = t;
  ++count_;

  int J = band_ == Band::All ? 0 : threshold_J(t, params_, k0_);
  for (size_t b = 0; b < sup_.size(); ++b) {
    int j = ladder_->j_min() + static_cast<int>(b);
    if (band_ == Band::Low && j > J) continue;
    if (band_ == Band::High && j <= J) continue;
    double v = scale * std::exp2(s_ * j) * block_norms[b];
    sup_[b] = std::max(sup_[b], v);
    l1_[b] += dt * v;
    l2sq_[b] += dt * v * v;
  }
}

double NormAccumulator::sup_norm() const {
  double s = 0.0;
  for (double v : sup_) s += v;
  return s;
}

double NormAccumulator::l1_norm() const {
  double s = 0.0;
  for (double v : l1_) s += v;
  return s;
}

double NormAccumulator::l2_norm() const {
  double s = 0.0;
  for (double v : l2sq_) s += std::sqrt(v);
  return s;
}

}  // namespace relaxlab
