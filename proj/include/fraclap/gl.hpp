#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraclap/field.hpp"
#include "fraclap/report.hpp"
#include "fraclap/spectral.hpp"

namespace fraclap {

/// Gradient flow toward steady states of (-Delta)^{alpha/2} u = u (1 - |u|^2).
struct GLConfig {
  double alpha = 1.0;
  double time_step = 0.1;
  long max_steps = 100000;
  /// Sup norm of the per-step update below which the flow is declared steady.
  double steady_tolerance = 1e-10;
  int components = 1;
};

/// time_step in (0, 0.5], steady_tolerance > 0, alpha in (0, 2), components >= 1.
void validate(const GLConfig& cfg);

struct GLRecord {
  long step = 0;
  double sup_abs = 0.0;
  double gl_energy = 0.0;
  double update_norm = 0.0;
};

struct GLTrace {
  std::vector<GLRecord> records;
  bool steady = false;
  /// sup |A_spec u - u (1 - |u|^2)| at the returned field.
  double residual = 0.0;
  /// sup |u| - 1.
  double margin = 0.0;
  bool bound_satisfied = false;
};

struct GLSteady {
  Field u;
  GLTrace trace;
};

/// Semi-implicit spectral stepper: u_hat <- (u_hat + dt F_hat) / (1 + dt |xi|^alpha)
/// with F = u (1 - |u|^2) evaluated nodewise (Euclidean |u| across components).
class GLFlow {
 public:
  GLFlow(const Grid& grid, const GLConfig& cfg);

  Field step(const Field& u);
  /// sup |A_spec u - u (1 - |u|^2)|.
  double residual(const Field& u);

 private:
  Grid grid_;
  GLConfig cfg_;
  RealFft fft_;
  std::vector<double> implicit_factor_;
  std::vector<double> multiplier_;
  std::vector<std::complex<double>> u_hat_;
  std::vector<std::complex<double>> f_hat_;
};

Field gl_step(const Field& u, const GLConfig& cfg);

/// Steps until the update sup norm drops below steady_tolerance or max_steps is hit.
/// A non-finite value aborts with NumericalError naming the step. If the final
/// residual is not below 10 * steady_tolerance / time_step the trace is marked not steady.
GLSteady solve_steady(const Field& u0, const GLConfig& cfg);

/// pass iff sup |u| <= 1 + tolerance; worst_violation = sup |u| - 1.
PropertyReport verify_bound(const Field& u, double tolerance = 1e-6);

/// Uniform random values in [lo, hi] per node and component (mt19937_64 seeded with seed).
Field random_uniform_field(const Grid& grid, int components, double lo, double hi, std::uint64_t seed);

/// Column text "step sup_abs_u gl_energy update_norm", one line per record.
std::string format_trace(const GLTrace& trace);

}  // namespace fraclap
