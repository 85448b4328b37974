// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fraclap/linear.hpp"
#include "fraclap/operator_matrix.hpp"
#include "fraclap/potential.hpp"
#include "fraclap/properties.hpp"
#include "fraclap/spectral.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace fraclap;

namespace {

using clock_type = std::chrono::steady_clock;

int failures = 0;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void verdict(int id, bool ok, const std::string& what) {
  if (!ok) ++failures;
  std::printf("[%s] AC%d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double sup_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

double sup_magnitude(const Field& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.node_count(); ++i) s = std::max(s, u.magnitude(i));
  return s;
}

void ac1() {
  constexpr double tol = 1e-12, limit = 1.0;
  const auto t0 = clock_type::now();
  double worst = 0.0;
  const Grid g(1, std::numbers::pi, 256, Topology::periodic);
  for (double alpha : {0.5, 1.0, 1.5}) {
    for (int k : {1, 5, 20}) {
      const Field u = sample(g, [k](double x, double) { return std::cos(k * x); });
      const Field Au = apply_spectral(u, alpha);
      const double lambda = std::pow(k, alpha);
      double err = 0.0;
      for (std::size_t i = 0; i < g.node_count(); ++i) err = std::max(err, std::abs(Au(i) - lambda * u(i)));
      worst = std::max(worst, err / lambda);
    }
  }
  const double t = seconds_since(t0);
  verdict(1, worst < tol && t < limit,
          fmt("spectral cos modes 1/5/20, alpha 0.5/1/1.5: rel err %.2e (tol %.0e), %.3f s (limit %.0f s)", worst, tol,
              t, limit));
}

void ac2() {
  constexpr double tol = 1e-3;
  struct Case {
    int dim;
    double alpha, a;
    int n;
  };
  double worst = 0.0;
  std::string detail;
  for (const Case c : {Case{1, 0.5, 8.0, 256}, Case{1, 1.0, 8.0, 256}, Case{2, 1.0, 6.0, 64}}) {
    const Grid g(c.dim, c.a, c.n, Topology::truncated);
    const Field u = sample(g, [](double x, double y) { return std::exp(-0.5 * (x * x + y * y)); });
    const std::size_t centre = c.dim == 1 ? g.node_of(c.n / 2) : g.node_of(c.n / 2, c.n / 2);
    const double got = build_operator_matrix(g, c.alpha).apply_at(u, centre);
    const double fourier = oracle::gaussian_fourier(c.dim, c.alpha);
    const double singular = oracle::gaussian_singular(c.dim, c.alpha, oracle::normalization_gamma_form(c.dim, c.alpha));
    const double err = std::max(std::abs(got - fourier), std::abs(got - singular)) / fourier;
    worst = std::max(worst, err);
    detail += fmt(" (%d,%.1f):%.1e", c.dim, c.alpha, err);
  }
  verdict(2, worst < tol, fmt("Gaussian at the origin vs Fourier and singular-integral oracles:%s (tol %.0e)",
                              detail.c_str(), tol));
}

void ac3() {
  constexpr double slack = 0.2, limit = 30.0;
  const auto t0 = clock_type::now();
  bool ok = true;
  std::string detail;
  for (double alpha : {0.5, 1.0, 1.5}) {
    std::vector<double> d;
    for (int n : {128, 256, 512}) {
      const Grid g(1, std::numbers::pi, n, Topology::periodic);
      const Field f = sample(g, [](double x, double) { return std::exp(std::sin(x)); });
      d.push_back(sup_diff(apply_spectral(f, alpha), build_operator_matrix(g, alpha, ExteriorData::periodic()).apply(f)));
    }
    const double order = std::min(std::log2(d[0] / d[1]), std::log2(d[1] / d[2]));
    ok = ok && order >= 2.0 - alpha - slack;
    detail += fmt(" a=%.1f:%.2f(>=%.1f)", alpha, order, 2.0 - alpha - slack);
  }
  const double t = seconds_since(t0);
  verdict(3, ok && t < limit, fmt("spectral/quadrature convergence order%s, %.2f s (limit %.0f s)", detail.c_str(), t, limit));
}

struct SteadyRun {
  Field u;
  double residual;
};

std::vector<SteadyRun> ac4() {
  constexpr double bound = 1e-6, limit = 300.0;
  constexpr int scalar_runs = 50, vector_runs = 10;
  const auto t0 = clock_type::now();
  const Grid g(1, 8.0, 256, Topology::periodic);
  std::vector<SteadyRun> states;
  double worst = 0.0;
  int unsteady = 0;
  for (int comps : {1, 2}) {
    GLConfig cfg;
    cfg.alpha = 1.0;
    cfg.components = comps;
    const int runs = comps == 1 ? scalar_runs : vector_runs;
    for (int r = 0; r < runs; ++r) {
      const Field u0 = random_uniform_field(g, comps, -3.0, 3.0, 4000 + 100 * comps + r);
      GLSteady s = solve_steady(u0, cfg);
      if (!s.trace.steady) ++unsteady;
      worst = std::max(worst, sup_magnitude(s.u) - 1.0);
      states.push_back({std::move(s.u), s.trace.residual});
    }
  }
  const double t = seconds_since(t0);
  verdict(4, worst <= bound && unsteady == 0 && t < limit,
          fmt("%d scalar + %d vector GL runs: max(sup|u| - 1) = %.2e (tol %.0e), %d not steady, %.2f s (limit %.0f s)",
              scalar_runs, vector_runs, worst, bound, unsteady, t, limit));
  return states;
}

void ac5(const std::vector<SteadyRun>& states) {
  constexpr double identity_tol = 1e-12;
  const Grid g(1, 8.0, 256, Topology::periodic);
  const OperatorMatrix A = build_operator_matrix(g, 1.0, ExteriorData::periodic());
  double worst_identity = 0.0, worst_ratio = 0.0, max_rho = 0.0;
  bool ok = !states.empty();
  for (const SteadyRun& s : states) {
    const QChainAnalysis q = q_chain_analysis(s.u, A, s.residual);
    worst_identity = std::max(worst_identity, q.identity_defect);
    max_rho = std::max(max_rho, q.rho);
    const double allowed = 10.0 * q.rho;
    ok = ok && q.identity_defect <= identity_tol && q.third_violation <= allowed;
    if (q.third_violation > 0.0) worst_ratio = std::max(worst_ratio, q.third_violation / allowed);
  }
  verdict(5, ok,
          fmt("Q chain on %zu steady states: identity defect %.2e (tol %.0e), A(Q+) + 2Q+^2 at most %.3f of 10 rho "
              "(max rho %.2e)",
              states.size(), worst_identity, identity_tol, worst_ratio, max_rho));
}

void ac6() {
  constexpr double tol = 1e-12;
  constexpr int fields = 1000;
  const Grid g(1, 8.0, 128, Topology::truncated);
  const OperatorMatrix A = build_operator_matrix(g, 0.7);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  int violations = 0;
  double worst = -1e300;
  for (int t = 0; t < fields; ++t) {
    std::vector<double> v(g.node_count());
    for (double& x : v) x = d(rng);
    const PropertyReport r = kato_check(Field(g, 1, v), A, tol);
    if (!r.passed) ++violations;
    worst = std::max(worst, r.worst_violation);
  }
  verdict(6, violations == 0,
          fmt("Kato on %d random fields (1-D truncated, alpha 0.7): %d violations, max A|f| - sgn(f)Af = %.2e (tol %.0e)",
              fields, violations, worst, tol));
}

void ac7() {
  constexpr double bound_tol = 1e-10, mono_tol = 1e-10, comparison_tol = 1e-8, limit = 60.0;
  const auto t0 = clock_type::now();
  const Grid g(1, 15.0, 512, Topology::truncated);
  const Field k = sample(g, [](double x, double) { return std::abs(x) < 1.0 ? 10.0 * std::pow(1.0 - x * x, 2) : 0.0; });
  const ExhaustionResult r = run_exhaustion({{2.0, 3.0, 4.0, 5.0, 6.0}, k, make_frac_params(1, 0.5)});
  double lo = 1e300, hi = -1e300;
  for (std::size_t j = 0; j < r.solutions.size(); ++j) {
    lo = std::min(lo, r.min_u[j]);
    hi = std::max(hi, r.sup_u[j]);
  }
  const double t = seconds_since(t0);
  const bool ok = lo >= -bound_tol && hi <= 1.0 + bound_tol && r.monotonicity_residual <= mono_tol &&
                  r.comparison_residual <= comparison_tol && t < limit;
  verdict(7, ok,
          fmt("exhaustion radii 2..6 (N 512, alpha 0.5): u in [%.3e, %.6f], monotonicity %.1e (tol %.0e), "
              "1 - U - V <= %.1e (tol %.0e), %.2f s (limit %.0f s)",
              lo, hi, r.monotonicity_residual, mono_tol, r.comparison_residual, comparison_tol, t, limit));
}

void ac8() {
  constexpr double feasible_tol = 1e-8, limit = 120.0;
  constexpr int restarts = 10000, sweep = 10000;
  const auto t0 = clock_type::now();
  const Grid g(1, 4.0, 64, Topology::truncated);
  const OperatorMatrix A = build_operator_matrix(g, 0.5);
  const FeasibilityResult f = feasibility_search(A, 2.0, restarts, 50, 8);
  const ContrapositiveSweep s = contrapositive_sweep(A, 2.0, sweep, 9);
  const double t = seconds_since(t0);
  verdict(8, f.best_feasible_sup <= feasible_tol && s.refuted == s.candidates && s.candidates == sweep && t < limit,
          fmt("feasibility search %d restarts (64 nodes, r 2): best feasible sup %.2e (tol %.0e); sweep refuted %d/%d; "
              "%.2f s (limit %.0f s)",
              restarts, f.best_feasible_sup, feasible_tol, s.refuted, s.candidates, t, limit));
}

void ac9() {
  constexpr double fluctuation_tol = 0.25, equation_tol = 2e-2;
  struct Case {
    int dim;
    double alpha, a;
    int n;
  };
  bool ok = true;
  std::string detail;
  for (const Case c : {Case{1, 0.5, 12.0, 512}, Case{2, 1.0, 6.0, 48}}) {
    const Grid g(c.dim, c.a, c.n, Topology::truncated);
    const FracParams p = make_frac_params(c.dim, c.alpha);
    const CutoffPotential cp = cutoff_potential(1.5, p, g);
    double lo = 1e300, hi = 0.0;
    for (double v : cp.phi.values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double err = cutoff_equation_error(cp, p);
    ok = ok && lo >= 0.0 && hi <= cp.bound_constant && cp.shell_fluctuation < fluctuation_tol && err < equation_tol;
    detail += fmt(" [n=%d alpha=%.1f: phi in [%.2e, %.4f], C %.4f, shell fluctuation %.3f, A(phi) err %.1e]", c.dim,
                  c.alpha, lo, hi, cp.bound_constant, cp.shell_fluctuation, err);
  }
  verdict(9, ok, fmt("cutoff potential%s (tol %.2f, %.0e)", detail.c_str(), fluctuation_tol, equation_tol));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void ac10() {
  const fs::path root = fs::temp_directory_path() / ("fraclap_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  bool ok = true;
  std::string detail;
  std::ostringstream sink;
  for (const char* sub : {"gl", "verify"}) {
    auto* old = std::cout.rdbuf(sink.rdbuf());
    const int first = cli::execute(sub, cli::resolve_config(sub, "", {}), root / sub / "a");
    const cli::json again = cli::resolve_config(sub, (root / sub / "a" / "manifest.json").string(), {});
    const int second = cli::execute(sub, again, root / sub / "b");
    std::cout.rdbuf(old);
    int files = 0, differing = 0;
    for (const auto& e : fs::directory_iterator(root / sub / "a")) {
      ++files;
      if (slurp(e.path()) != slurp(root / sub / "b" / e.path().filename())) ++differing;
    }
    ok = ok && first == 0 && second == 0 && differing == 0 && files > 1;
    detail += fmt(" %s: %d files, %d differ, exit %d/%d;", sub, files, differing, first, second);
  }
  fs::remove_all(root);
  verdict(10, ok, fmt("rerun from manifest is bit-identical:%s", detail.c_str()));
}

}  // namespace

int main() {
  const auto t0 = clock_type::now();
  ac1();
  ac2();
  ac3();
  const std::vector<SteadyRun> states = ac4();
  ac5(states);
  ac6();
  ac7();
  ac8();
  ac9();
  ac10();
  std::printf("%d/10 criteria passed in %.1f s\n", 10 - failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
