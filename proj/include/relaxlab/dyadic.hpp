#pragma once
// Littlewood-Paley decomposition on the discrete torus.  The low-frequency
// cutoff chi equals 1 on |xi| <= 3/4 and 0 on |xi| >= 4/3 (smooth sigmoid
// built from exp(-1/x) in between), phi(xi) = chi(xi/2) - chi(xi), and the
// dyadic blocks Delta_j carry the multiplier phi(2^-j |xi|).  On any fixed
// grid the blocks with nonempty support form a finite ladder and their sum
// telescopes to 1 on every resolved nonzero frequency.

#include <atomic>
#include <vector>

#include "relaxlab/model.hpp"
#include "relaxlab/spectral.hpp"

namespace relaxlab {

inline constexpr int kDefaultK0 = 2;  // band-splitting safety offset

double lp_chi(double r);
double lp_phi(double r);

class DyadicLadder {
 public:
  explicit DyadicLadder(const Grid& g);

  const Grid& grid() const { return grid_; }
  int j_min() const { return jmin_; }
  int j_max() const { return jmax_; }
  int n_blocks() const { return jmax_ - jmin_ + 1; }

  // L2 norms of all dyadic blocks, Parseval-evaluated in Fourier space
  std::vector<double> block_norms(const SpectralField& u) const;

  // homogeneous Besov norm  sum_j 2^(js) ||Delta_j u||_L2 ; the zero mode is
  // dropped, and a nonzero mean is counted in mean_warnings()
  double besov(const SpectralField& u, double s) const;

  SpectralField block(const SpectralField& u, int j) const;

  // keep blocks j <= J (multiplier chi(2^-(J+1) xi)); the mean passes through
  SpectralField lowpass_below(const SpectralField& u, int J) const;

  int mean_warnings() const { return mean_warnings_.load(); }

 private:
  Grid grid_;
  int jmin_, jmax_;
  std::vector<std::vector<double>> phi_;  // [j - jmin_][spectral idx]
  mutable std::atomic<int> mean_warnings_{0};
};

// Frequency threshold separating the low band (j <= J) from the high band
// (j >= J+1):  J_t = floor(log2(1/(eps b(t)))) - k0.
int threshold_J(double t, const PhysParams& p, int k0 = kDefaultK0);

// Time at which block j crosses the threshold, max((mu/(eps 2^(k0+j)))^(1/lambda) - 1, 0).
// Only meaningful for lambda != 0 (throws otherwise).
double crossover_time_tj(int j, const PhysParams& p, int k0 = kDefaultK0);

}  // namespace relaxlab
