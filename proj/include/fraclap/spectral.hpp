#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "fraclap/field.hpp"

namespace fraclap {

/// Real-to-complex FFT pair on a periodic grid (FFTW backed). The half spectrum
/// has size n/2+1 in 1-D and n*(n/2+1) in 2-D; inverse() includes the 1/N scaling.
class RealFft {
 public:
  explicit RealFft(const Grid& grid);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t spectrum_size() const { return spectrum_size_; }
  /// |xi_k| for each entry of the half spectrum, xi = 2 pi m / (2 half_extent).
  const std::vector<double>& wavenumber_magnitude() const { return wavenumber_; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Plans;
  Grid grid_;
  std::size_t spectrum_size_;
  std::vector<double> wavenumber_;
  std::unique_ptr<Plans> plans_;
};

/// Fourier-multiplier form of (-Delta)^{alpha/2} on a periodic grid:
/// coefficients are scaled by |xi_k|^alpha, the zero mode maps to zero.
class SpectralOperator {
 public:
  SpectralOperator(const Grid& grid, double alpha);

  const Grid& grid() const { return grid_; }
  double alpha() const { return alpha_; }
  /// Acts componentwise on vector fields.
  Field apply(const Field& u);

 private:
  Grid grid_;
  double alpha_;
  RealFft fft_;
  std::vector<double> multiplier_;
  std::vector<std::complex<double>> spectrum_;
};

Field apply_spectral(const Field& u, double alpha);

}  // namespace fraclap
