#pragma once
// Linearized dynamics, handled exactly per Fourier mode.  Writing m for the
// compressible velocity potential (m = eps Lambda^{-1} div u) the linear
// system decouples into 2x2 blocks
//
//   d/dt (n_hat, m_hat) = [ [0, -P'(rho_bar)|xi|/eps], [|xi|/eps, -1/(eps^2 b(t))] ] (n_hat, m_hat)
//
// plus exactly solvable incompressible modes.  The blocks are advanced by an
// adaptive embedded Runge-Kutta integration of the real fundamental matrix,
// which doubles as the stiff kernel of the split-step Euler solver.

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "relaxlab/dyadic.hpp"
#include "relaxlab/model.hpp"
#include "relaxlab/spectral.hpp"

namespace relaxlab {

struct ToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModeState {
  std::complex<double> n_hat{0.0, 0.0};
  std::complex<double> m_hat{0.0, 0.0};
  std::vector<std::complex<double>> omega_hat;  // empty in d=1, one entry in d=2
};

enum class FreqBand { Low, High };

// lambda_pm = -1/(2 eps^2 b) +- (1/(2 eps)) sqrt(1/(eps^2 b^2) - 4 P' |xi|^2);
// for negative discriminant lambda_plus carries the positive imaginary part.
std::pair<std::complex<double>, std::complex<double>> eigenvalues(double xi_mag,
                                                                  double t,
                                                                  const PhysParams& p);

// low iff floor(log2 |xi|) <= threshold_J(t); ties go low, |xi| = 0 is low
FreqBand classify_frequency(double xi_mag, double t, const PhysParams& p,
                            int k0 = kDefaultK0);

struct Mat2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;
};

// Fundamental matrix of the (n_hat, m_hat) block over [t0, t1]
Mat2 fundamental_nm(double xi_mag, double t0, double t1, const PhysParams& p,
                    double rtol = 1e-10, double atol = 1e-12);

ModeState propagate_mode(const ModeState& ms, const std::array<double, 2>& xi,
                         double t0, double t1, const PhysParams& p,
                         double rtol = 1e-10, double atol = 1e-12);

struct FieldTrajectory {
  std::vector<double> times;
  std::vector<SpectralField> fields;
};

// n_tt + P'(rho_bar)|xi|^2 n + n_t / b(t) = 0 per mode, adaptive integration
FieldTrajectory solve_damped_wave(const SpectralField& n0, const SpectralField& n0_t,
                                  double T, const PhysParams& p, int snapshots,
                                  double rtol = 1e-10, double atol = 1e-12);

// n_hat(t) = n_hat(0) exp(-P'(rho_bar)|xi|^2 B(t)), exact
FieldTrajectory solve_heat_timedep(const SpectralField& n0, double T,
                                   const PhysParams& p, int snapshots);

// ||n_wave(t) - n_heat(t)||_L2 / max(||n_heat(t)||_L2, 1e-14)
double diffusion_gap(const FieldTrajectory& wave, const FieldTrajectory& heat, double t);

}  // namespace relaxlab
