#pragma once
// Periodic grids on [0,L)^d (d = 1,2) and real fields stored in both
// physical and half-complex Fourier form (FFTW r2c layout, coefficients
// normalized so that  u(x) = sum_k c_k exp(i xi_k . x)  with Hermitian
// symmetry implicit).  Both representations are kept lazily in sync.

#include <complex>
#include <vector>

namespace relaxlab {

struct Grid {
  int dim;
  int n;          // points per axis, power of two
  double length;  // torus size L

  Grid(int dim_, int n_, double length_);

  int size_real() const { return dim == 1 ? n : n * n; }
  int size_spec() const { return dim == 1 ? n / 2 + 1 : n * (n / 2 + 1); }
  double dx() const { return length / n; }
  double xi_unit() const;  // 2 pi / L

  // spectral index -> wavenumbers; 2D layout is idx = kx*(n/2+1) + ky
  int k_component(int idx, int axis) const;  // signed integer wavenumber
  double xi_component(int idx, int axis) const;
  double xi_abs(int idx) const;
  double herm_weight(int idx) const;  // 2 if the conjugate partner is implicit
  bool dealias_keep(int idx) const;   // 2/3-rule mask
  double xi_abs_max() const;

  bool operator==(const Grid& o) const {
    return dim == o.dim && n == o.n && length == o.length;
  }
};

class SpectralField {
 public:
  explicit SpectralField(const Grid& g);

  const Grid& grid() const { return grid_; }

  // read access, syncing the requested representation
  const std::vector<double>& values() const;
  const std::vector<std::complex<double>>& coeffs() const;

  // write access, invalidating the other representation
  std::vector<double>& values_mut();
  std::vector<std::complex<double>>& coeffs_mut();

  double mean() const;           // zero-mode coefficient
  double linf() const;           // max |u(x)| over grid points
  double l2_phys() const;        // sqrt( (L/n)^d sum u^2 )
  double l2_spec() const;        // same value, via Parseval
  void subtract_mean();

  SpectralField derivative(int axis) const;  // i xi_axis multiplier, Nyquist zeroed
  void dealias();                            // zero modes beyond 2/3 cutoff

 private:
  Grid grid_;
  mutable std::vector<double> vals_;
  mutable std::vector<std::complex<double>> coef_;
  mutable bool vals_ok_ = true, coef_ok_ = true;
  void sync_vals() const;
  void sync_coef() const;
};

// FFT helpers used by SpectralField (plans cached per grid shape, safe to
// call from several threads).
void fft_forward(const Grid& g, const double* vals, std::complex<double>* coef);
void fft_backward(const Grid& g, const std::complex<double>* coef, double* vals);

}  // namespace relaxlab
