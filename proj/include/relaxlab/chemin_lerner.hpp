#pragma once
// Streaming Chemin-Lerner seminorms.  The accumulator is fed per-block L2
// norms at increasing sample times; each sample is weighted 2^(js) * scale
// and binned into the low band (j <= J_t) or high band (j >= J_t + 1) using
// the threshold at that instant, so a block may change band mid-run.  Time
// integrals use the left-endpoint rule: pass the state at t_k with weight
// dt_k = t_{k+1} - t_k before stepping.

#include <limits>
#include <vector>

#include "relaxlab/dyadic.hpp"
#include "relaxlab/model.hpp"

namespace relaxlab {

enum class Band { Low, High, All };

class NormAccumulator {
 public:
  NormAccumulator(const DyadicLadder& ladder, double s, Band band,
                  const PhysParams& p, int k0 = kDefaultK0);

  // block_norms must come from the same ladder; t strictly increasing
  void accumulate(const std::vector<double>& block_norms, double t, double dt,
                  double scale = 1.0);

  double sup_norm() const;  // sum_j sup_k of weighted samples
  double l1_norm() const;   // sum_j sum_k dt * weighted sample
  double l2_norm() const;   // sum_j sqrt( sum_k dt * weighted sample^2 )
  double last_time() const { return last_t_; }
  int samples() const { return count_; }

 private:
  const DyadicLadder* ladder_;
  double s_;
  Band band_;
  PhysParams params_;
  int k0_;
  double last_t_ = -std::numeric_limits<double>::infinity();
  int count_ = 0;
  std::vector<double> sup_, l1_, l2sq_;
};

}  // namespace relaxlab
