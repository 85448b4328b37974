#include "fraclap/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include "fraclap/error.hpp"

namespace fraclap {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Plans {
  double* real = nullptr;
  fftw_complex* complex = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
    fftw_free(real);
    fftw_free(complex);
  }
};

RealFft::RealFft(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  require(grid.topology() == Topology::periodic, "spectral transforms require a periodic grid");
  const int n = grid.points_per_axis();
  const int half = n / 2 + 1;
  spectrum_size_ = grid.dim() == 1 ? half : static_cast<std::size_t>(n) * half;

  const double k0 = 2.0 * std::numbers::pi / (2.0 * grid.half_extent());
  wavenumber_.resize(spectrum_size_);
  auto signed_mode = [n](int k) { return k <= n / 2 ? k : k - n; };
  if (grid.dim() == 1) {
    for (int k = 0; k < half; ++k) wavenumber_[k] = k0 * k;
  } else {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < half; ++b) {
        wavenumber_[static_cast<std::size_t>(a) * half + b] = k0 * std::hypot(signed_mode(a), b);
      }
    }
  }

  std::lock_guard lock(planner_mutex());
  plans_->real = fftw_alloc_real(grid.node_count());
  plans_->complex = fftw_alloc_complex(spectrum_size_);
  if (grid.dim() == 1) {
    plans_->forward = fftw_plan_dft_r2c_1d(n, plans_->real, plans_->complex, FFTW_ESTIMATE);
    plans_->inverse = fftw_plan_dft_c2r_1d(n, plans_->complex, plans_->real, FFTW_ESTIMATE);
  } else {
    plans_->forward = fftw_plan_dft_r2c_2d(n, n, plans_->real, plans_->complex, FFTW_ESTIMATE);
    plans_->inverse = fftw_plan_dft_c2r_2d(n, n, plans_->complex, plans_->real, FFTW_ESTIMATE);
  }
  if (!plans_->forward || !plans_->inverse) throw NumericalError("FFTW planning failed");
}

RealFft::~RealFft() = default;

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  std::memcpy(plans_->real, in.data(), grid_.node_count() * sizeof(double));
  fftw_execute(plans_->forward);
  std::memcpy(static_cast<void*>(out.data()), plans_->complex, spectrum_size_ * sizeof(fftw_complex));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  std::memcpy(plans_->complex, in.data(), spectrum_size_ * sizeof(fftw_complex));
  fftw_execute(plans_->inverse);
  const double scale = 1.0 / static_cast<double>(grid_.node_count());
  for (std::size_t i = 0; i < grid_.node_count(); ++i) out[i] = plans_->real[i] * scale;
}

SpectralOperator::SpectralOperator(const Grid& grid, double alpha)
    : grid_(grid), alpha_(alpha), fft_(grid), spectrum_(fft_.spectrum_size()) {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie strictly inside (0, 2)");
  multiplier_.resize(fft_.spectrum_size());
  const auto& xi = fft_.wavenumber_magnitude();
  for (std::size_t k = 0; k < xi.size(); ++k) multiplier_[k] = xi[k] == 0.0 ? 0.0 : std::pow(xi[k], alpha);
}

Field SpectralOperator::apply(const Field& u) {
  require(u.grid() == grid_, "field grid does not match the spectral operator");
  const int comps = u.components();
  const std::size_t nodes = u.node_count();
  std::vector<double> scratch(nodes);
  std::vector<double> out(nodes * comps);
  for (int c = 0; c < comps; ++c) {
    for (std::size_t i = 0; i < nodes; ++i) scratch[i] = u(i, c);
    fft_.forward(scratch, spectrum_);
    for (std::size_t k = 0; k < spectrum_.size(); ++k) spectrum_[k] *= multiplier_[k];
    fft_.inverse(spectrum_, scratch);
    for (std::size_t i = 0; i < nodes; ++i) out[i * comps + c] = scratch[i];
  }
  return Field(grid_, comps, std::move(out));
}

Field apply_spectral(const Field& u, double alpha) {
  require(u.grid().topology() == Topology::periodic,
          "apply_spectral requires a periodic grid; truncated grids need exterior data (use the quadrature operator)");
  SpectralOperator op(u.grid(), alpha);
  return op.apply(u);
}

}  // namespace fraclap
