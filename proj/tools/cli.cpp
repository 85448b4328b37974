#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "fraclap/constants.hpp"
#include "fraclap/error.hpp"
#include "fraclap/field.hpp"
#include "fraclap/gl.hpp"
#include "fraclap/io.hpp"
#include "fraclap/linear.hpp"
#include "fraclap/operator_matrix.hpp"
#include "fraclap/potential.hpp"
#include "fraclap/properties.hpp"
#include "fraclap/spectral.hpp"

namespace fraclap::cli {

namespace fs = std::filesystem;

namespace {

json grid_json(int dim, double half_extent, int n, const char* topology) {
  return {{"dim", dim}, {"half_extent", half_extent}, {"points_per_axis", n}, {"topology", topology}};
}

Grid grid_from(const json& j) {
  return make_grid(j.at("dim").get<int>(), j.at("half_extent").get<double>(), j.at("points_per_axis").get<int>(),
                   topology_from_string(j.at("topology").get<std::string>().c_str()));
}

void check_keys(const json& given, const json& defaults, const std::string& path) {
  if (!given.is_object() || !defaults.is_object()) return;
  for (const auto& [key, value] : given.items()) {
    if (!defaults.contains(key)) throw ValidationError("unknown config key '" + path + key + "'");
    check_keys(value, defaults.at(key), path + key + ".");
  }
}

// splitmix64 finalizer: independent per-stream seeds from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream * 0x100000001ULL + index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GLConfig gl_config_from(const json& j, int components) {
  GLConfig cfg;
  cfg.alpha = j.at("alpha").get<double>();
  cfg.time_step = j.at("time_step").get<double>();
  cfg.max_steps = j.at("max_steps").get<long>();
  cfg.steady_tolerance = j.at("steady_tolerance").get<double>();
  cfg.components = components;
  validate(cfg);
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) { write_file_atomic(path.string(), text); }

double sup_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

ExteriorData exterior_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return ExteriorData::zero();
  if (kind == "constant") return ExteriorData::constant(j.at("value").get<double>());
  if (kind == "periodic") return ExteriorData::periodic();
  throw ValidationError("exterior.kind must be zero, constant or periodic, got '" + kind + "'");
}

Field source_bump(const Grid& grid, double amplitude, double radius) {
  require(amplitude >= 0.0 && radius > 0.0, "source amplitude must be >= 0 and radius > 0");
  return sample(grid, [&](double x, double y) {
    const double s = (x * x + y * y) / (radius * radius);
    return s < 1.0 ? amplitude * (1.0 - s) * (1.0 - s) : 0.0;
  });
}

std::string describe_grid(const Grid& g) {
  std::ostringstream s;
  s << "dim=" << g.dim() << " n=" << g.points_per_axis() << " a=" << format_exact(g.half_extent())
    << " topology=" << to_string(g.topology());
  return s.str();
}

// ---- verify suite -------------------------------------------------------------

std::vector<PropertyReport> verify_kato(const json& j, std::uint64_t seed) {
  const Grid grid = grid_from(j.at("grid"));
  const double alpha = j.at("alpha").get<double>();
  const int count = j.at("fields").get<int>();
  const OperatorMatrix A = build_operator_matrix(grid, alpha);
  PropertyReport kato = make_report("kato", 0.0, std::nullopt, 1e-12, "");
  PropertyReport pos = make_report("kato_positive_part", 0.0, std::nullopt, 1e-12, "");
  for (int s = 0; s < count; ++s) {
    const Field f = random_uniform_field(grid, 1, -1.0, 1.0, derive_seed(seed, 1, s));
    const PropertyReport k = kato_check(f, A);
    const PropertyReport p = positive_part_check(f, A);
    if (k.worst_violation > kato.worst_violation) kato = k;
    if (p.worst_violation > pos.worst_violation) pos = p;
  }
  std::ostringstream ctx;
  ctx << describe_grid(grid) << " alpha=" << format_exact(alpha) << " fields=" << count << " seed=" << seed;
  kato = make_report("kato", kato.worst_violation, kato.violation_node, 1e-12, ctx.str());
  pos = make_report("kato_positive_part", pos.worst_violation, pos.violation_node, 1e-12, ctx.str());
  return {kato, pos};
}

std::vector<PropertyReport> verify_gl(const json& j, std::uint64_t seed) {
  const Grid grid = grid_from(j.at("grid"));
  const double lo = j.at("low").get<double>();
  const double hi = j.at("high").get<double>();
  const OperatorMatrix A = build_operator_matrix(grid, j.at("alpha").get<double>(), ExteriorData::periodic());
  int not_steady = 0;
  double worst_margin = -1.0;
  double worst_chain = 0.0;
  long max_steps_used = 0;
  std::optional<std::size_t> chain_node;
  int runs = 0;
  for (int comps : {1, 2}) {
    const int count = j.at(comps == 1 ? "scalar_runs" : "vector_runs").get<int>();
    const GLConfig cfg = gl_config_from(j, comps);
    for (int s = 0; s < count; ++s, ++runs) {
      const Field u0 = random_uniform_field(grid, comps, lo, hi, derive_seed(seed, 10 + comps, s));
      const GLSteady st = solve_steady(u0, cfg);
      max_steps_used = std::max<long>(max_steps_used, static_cast<long>(st.trace.records.size()));
      worst_margin = std::max(worst_margin, st.trace.margin);
      if (!st.trace.steady) {
        ++not_steady;
        continue;
      }
      const PropertyReport q = q_chain_check(st.u, A, st.trace.residual);
      if (q.worst_violation > worst_chain) {
        worst_chain = q.worst_violation;
        chain_node = q.violation_node;
      }
    }
  }
  std::ostringstream ctx;
  ctx << describe_grid(grid) << " alpha=" << format_exact(j.at("alpha").get<double>()) << " runs=" << runs
      << " init=[" << format_exact(lo) << "," << format_exact(hi) << "] seed=" << seed
      << " max_steps_used=" << max_steps_used;
  return {make_report("gl_steady", not_steady, std::nullopt, 0.0, ctx.str() + " (count of runs not steady)"),
          make_report("gl_bound", worst_margin, std::nullopt, 1e-6, ctx.str() + " (sup|u| - 1)"),
          make_report("q_chain", worst_chain, chain_node, 1.0, ctx.str() + " (ratio to tolerance)")};
}

std::vector<PropertyReport> verify_theorem1(const json& j, std::uint64_t seed) {
  const Grid grid = grid_from(j.at("grid"));
  const GLConfig cfg = gl_config_from(j, 1);
  std::vector<double> spike(grid.node_count(), 0.0);
  spike[grid.node_count() / 2] = 3.0;
  const Field inits[] = {Field(grid, 1, spike),
                         random_uniform_field(grid, 1, j.at("low").get<double>(), j.at("high").get<double>(),
                                              derive_seed(seed, 20, 0))};
  const char* names[] = {"theorem1_spike", "theorem1_random"};
  std::vector<PropertyReport> out;
  for (int k = 0; k < 2; ++k) {
    Theorem1Result r = theorem1_pipeline(inits[k], cfg);
    r.overall.name = names[k];
    out.push_back(r.overall);
  }
  return out;
}

std::vector<PropertyReport> verify_liouville(const json& j, std::uint64_t seed) {
  const Grid grid = grid_from(j.at("grid"));
  const double alpha = j.at("alpha").get<double>();
  const double R = j.at("cutoff_scale").get<double>();
  const FracParams params = make_frac_params(grid.dim(), alpha);
  const OperatorMatrix A = build_operator_matrix(grid, alpha);
  std::vector<PropertyReport> out;

  SubsolutionCandidate zero{Field(grid), 2.0, 2.0};
  PropertyReport z = liouville_certificate(zero, R, params, A);
  z.name = "liouville_zero";
  out.push_back(z);

  SubsolutionCandidate bump{sample(grid, [](double x, double y) { return std::exp(-(x * x + y * y)); }), 2.0, 2.0};
  PropertyReport b = liouville_certificate(bump, R, params, A);
  b.name = "liouville_bump";
  out.push_back(b);
  out.push_back(make_report("liouville_bump_refuted", bump.certified ? 1.0 : 0.0, b.violation_node, 0.0,
                            "a positive Gaussian bump must fail certification"));

  const int sweep = j.at("sweep").get<int>();
  int e = 0;
  for (double r : j.at("exponents").get<std::vector<double>>()) {
    const ContrapositiveSweep cs = contrapositive_sweep(A, r, sweep, derive_seed(seed, 30, e++));
    std::ostringstream ctx;
    ctx << describe_grid(grid) << " alpha=" << format_exact(alpha) << " r=" << format_exact(r)
        << " candidates=" << cs.candidates << " refuted=" << cs.refuted;
    out.push_back(make_report("contrapositive_r" + format_exact(r), cs.candidates - cs.refuted, std::nullopt, 0.0,
                              ctx.str()));
  }

  const int restarts = j.at("restarts").get<int>();
  const int iterations = j.at("iterations").get<int>();
  const FeasibilityResult fr = feasibility_search(A, 2.0, restarts, iterations, derive_seed(seed, 40, 0));
  std::ostringstream ctx;
  ctx << describe_grid(grid) << " alpha=" << format_exact(alpha) << " r=2 restarts=" << fr.restarts
      << " iterations=" << fr.iterations << " feasible_iterates=" << fr.feasible_iterates
      << " max_start_sup=" << format_exact(fr.max_start_sup);
  out.push_back(make_report("feasibility_search", fr.best_feasible_sup, std::nullopt, 1e-8, ctx.str()));
  return out;
}

std::vector<PropertyReport> verify_exhaustion(const json& j) {
  const Grid grid = grid_from(j.at("grid"));
  const double alpha = j.at("alpha").get<double>();
  ExhaustionConfig cfg{j.at("radii").get<std::vector<double>>(),
                       source_bump(grid, j.at("source").at("amplitude").get<double>(),
                                   j.at("source").at("radius").get<double>()),
                       make_frac_params(grid.dim(), alpha)};
  std::ostringstream ctx;
  ctx << describe_grid(grid) << " alpha=" << format_exact(alpha) << " radii=" << cfg.radii.size();
  try {
    const ExhaustionResult r = run_exhaustion(cfg);
    double bound = 0.0;
    for (std::size_t k = 0; k < r.radii.size(); ++k) bound = std::max({bound, -r.min_u[k], r.sup_u[k] - 1.0});
    ctx << " cauchy_gap=" << format_exact(r.cauchy_gap) << " sup_U=" << format_exact(r.nontriviality);
    return {make_report("exhaustion_bounds", bound, std::nullopt, 1e-10, ctx.str()),
            make_report("exhaustion_monotone", r.monotonicity_residual, std::nullopt, 1e-10, ctx.str()),
            make_report("exhaustion_comparison", r.comparison_residual, std::nullopt, 1e-8, ctx.str())};
  } catch (const NumericalError& e) {
    return {make_report("exhaustion", std::numeric_limits<double>::infinity(), std::nullopt, 0.0,
                        ctx.str() + " " + e.what())};
  }
}

std::vector<PropertyReport> verify_cutoff(const json& j) {
  const Grid grid = grid_from(j.at("grid"));
  const double alpha = j.at("alpha").get<double>();
  const double R = j.at("R").get<double>();
  const FracParams params = make_frac_params(grid.dim(), alpha);
  const CutoffPotential cp = cutoff_potential(R, params, grid);
  const double min_phi = *std::min_element(cp.phi.values().begin(), cp.phi.values().end());
  const double err = cutoff_equation_error(cp, params);
  std::ostringstream ctx;
  ctx << describe_grid(grid) << " alpha=" << format_exact(alpha) << " R=" << format_exact(R)
      << " C=" << format_exact(cp.bound_constant) << " shell_ratio=[" << format_exact(cp.shell_ratio_min) << ","
      << format_exact(cp.shell_ratio_max) << "]";
  return {make_report("cutoff_nonnegative", std::max(0.0, -min_phi), std::nullopt, 0.0, ctx.str()),
          make_report("cutoff_shell_decay", cp.shell_fluctuation, std::nullopt, 0.25, ctx.str()),
          make_report("cutoff_equation", err, std::nullopt, 2e-2, ctx.str() + " (relative L2 of A phi - xi_R)")};
}

// ---- bench --------------------------------------------------------------------

template <class Fn>
double best_time(Fn&& fn, int repeats) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  fn();
  const double single = std::chrono::duration<double>(clock::now() - t0).count();
  const int inner = std::max(1, static_cast<int>(std::ceil(0.02 / std::max(single, 1e-9))));
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < repeats; ++r) {
    const auto s = clock::now();
    for (int k = 0; k < inner; ++k) fn();
    best = std::min(best, std::chrono::duration<double>(clock::now() - s).count() / inner);
  }
  return best;
}

}  // namespace

json default_config(const std::string& subcommand) {
  const json gl_grid = grid_json(1, 8.0, 256, "periodic");
  if (subcommand == "apply") {
    return {{"seed", 0},
            {"input", ""},
            {"alpha", 1.0},
            {"operator", "quadrature"},
            {"exterior", {{"kind", "zero"}, {"value", 0.0}}},
            {"study", {{"sizes", {128, 256, 512}}, {"half_extent", std::numbers::pi}}}};
  }
  if (subcommand == "gl") {
    return {{"seed", 1},
            {"grid", gl_grid},
            {"alpha", 1.0},
            {"time_step", 0.1},
            {"max_steps", 100000},
            {"steady_tolerance", 1e-10},
            {"components", 1},
            {"init", {{"kind", "uniform"}, {"low", -3.0}, {"high", 3.0}, {"value", 1.0}, {"path", ""}}}};
  }
  if (subcommand == "exhaust") {
    return {{"seed", 0},
            {"grid", grid_json(1, 15.0, 512, "truncated")},
            {"alpha", 0.5},
            {"radii", {2.0, 3.0, 4.0, 5.0, 6.0}},
            {"source", {{"amplitude", 10.0}, {"radius", 1.0}}},
            {"tolerance", 1e-12}};
  }
  if (subcommand == "verify") {
    return {{"seed", 1},
            {"kato", {{"grid", grid_json(1, 8.0, 128, "truncated")}, {"alpha", 0.7}, {"fields", 1000}}},
            {"gl",
             {{"grid", gl_grid},
              {"alpha", 1.0},
              {"time_step", 0.1},
              {"max_steps", 100000},
              {"steady_tolerance", 1e-10},
              {"scalar_runs", 50},
              {"vector_runs", 10},
              {"low", -3.0},
              {"high", 3.0}}},
            {"liouville",
             {{"grid", grid_json(1, 4.0, 64, "truncated")},
              {"alpha", 0.5},
              {"cutoff_scale", 1.3},
              {"exponents", {1.0, 1.5, 2.0}},
              {"sweep", 10000},
              {"restarts", 10000},
              {"iterations", 50}}},
            {"exhaustion",
             {{"grid", grid_json(1, 15.0, 512, "truncated")},
              {"alpha", 0.5},
              {"radii", {2.0, 3.0, 4.0, 5.0, 6.0}},
              {"source", {{"amplitude", 10.0}, {"radius", 1.0}}}}},
            {"cutoff", {{"grid", grid_json(1, 12.0, 512, "truncated")}, {"alpha", 0.5}, {"R", 1.5}}}};
  }
  if (subcommand == "bench") {
    return {{"seed", 0}, {"alpha", 1.0}, {"half_extent", 8.0}, {"sizes", {256, 512, 1024}}, {"repeats", 7}};
  }
  throw ValidationError("unknown subcommand '" + subcommand + "'");
}

json resolve_config(const std::string& subcommand, const std::string& config_path, const Overrides& ov) {
  json cfg = default_config(subcommand);
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ValidationError("cannot open config " + config_path);
    json given;
    try {
      given = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ValidationError("config " + config_path + " is not valid JSON: " + e.what());
    }
    if (!given.is_object()) throw ValidationError("config must be a JSON object");
    if (given.contains("subcommand")) {
      if (given.at("subcommand") != subcommand) {
        throw ValidationError("config was written for '" + given.at("subcommand").get<std::string>() + "', not '" +
                              subcommand + "'");
      }
      given.erase("subcommand");
    }
    check_keys(given, cfg, "");
    cfg.merge_patch(given);
  }
  json* grid_target = nullptr;
  json* alpha_target = nullptr;
  if (subcommand == "gl" || subcommand == "exhaust") grid_target = &cfg.at("grid");
  if (subcommand == "verify") {
    grid_target = &cfg.at("gl").at("grid");
    alpha_target = &cfg.at("gl").at("alpha");
  } else {
    alpha_target = &cfg.at("alpha");
  }
  if (ov.seed) cfg["seed"] = *ov.seed;
  if (ov.alpha) *alpha_target = *ov.alpha;
  if (ov.grid_n || ov.half_extent) {
    if (subcommand == "bench" && ov.half_extent && !ov.grid_n) {
      cfg["half_extent"] = *ov.half_extent;
    } else {
      if (!grid_target) {
        throw ValidationError("--grid-n does not apply to '" + subcommand + "'; its grid comes from " +
                              (subcommand == "apply" ? "the input field" : "the sizes list"));
      }
      if (ov.grid_n) (*grid_target)["points_per_axis"] = *ov.grid_n;
      if (ov.half_extent) (*grid_target)["half_extent"] = *ov.half_extent;
    }
  }
  if (ov.input) {
    if (subcommand != "apply") throw ValidationError("--input only applies to 'apply'");
    cfg["input"] = *ov.input;
  }
  return cfg;
}

int cmd_apply(const json& cfg, const fs::path& out) {
  const std::string input = cfg.at("input").get<std::string>();
  require(!input.empty(), "apply needs an input field (--input or config key 'input')");
  const double alpha = cfg.at("alpha").get<double>();
  const std::string op = cfg.at("operator").get<std::string>();
  require(op == "quadrature" || op == "spectral", "operator must be 'quadrature' or 'spectral'");
  const Field u = read_field_file(input);
  const Grid& grid = u.grid();
  normalization_constant(grid.dim(), alpha);
  const bool periodic = grid.topology() == Topology::periodic;

  std::optional<Field> spectral;
  std::optional<Field> quadrature;
  if (op == "spectral" || periodic) {
    if (op == "spectral") require(periodic, "the spectral operator needs a periodic grid");
    spectral = apply_spectral(u, alpha);
  }
  if (op == "quadrature") {
    const ExteriorData ext = periodic ? ExteriorData::periodic() : exterior_from(cfg.at("exterior"));
    quadrature = build_operator_matrix(grid, alpha, ext).apply(u);
  } else if (periodic) {
    quadrature = build_operator_matrix(grid, alpha, ExteriorData::periodic()).apply(u);
  }
  write_field_file((out / "output.fld").string(), op == "spectral" ? *spectral : *quadrature);

  std::ostringstream rep;
  rep << "# alpha " << format_exact(alpha) << " operator " << op << " " << describe_grid(grid) << '\n';
  if (periodic) {
    rep << "input_discrepancy " << format_exact(sup_diff(*spectral, *quadrature)) << '\n';
  } else {
    rep << "input_discrepancy - (spectral form needs a periodic grid)\n";
  }
  const double a = cfg.at("study").at("half_extent").get<double>();
  rep << "# convergence study on exp(sin(pi x / a)), a = " << format_exact(a) << ", 1-D periodic\n";
  rep << "# n discrepancy order\n";
  double prev = 0.0;
  for (int n : cfg.at("study").at("sizes").get<std::vector<int>>()) {
    const Grid g = make_grid(1, a, n, Topology::periodic);
    const Field f = sample(g, [a](double x, double) { return std::exp(std::sin(std::numbers::pi * x / a)); });
    const double d = sup_diff(apply_spectral(f, alpha), build_operator_matrix(g, alpha, ExteriorData::periodic()).apply(f));
    rep << n << ' ' << format_exact(d) << ' ';
    if (prev > 0.0) {
      rep << format_exact(std::log2(prev / d));
    } else {
      rep << '-';
    }
    rep << '\n';
    prev = d;
  }
  write_text(out / "consistency.txt", rep.str());
  return 0;
}

int cmd_gl(const json& cfg, const fs::path& out) {
  const Grid grid = grid_from(cfg.at("grid"));
  const GLConfig gl = gl_config_from(cfg, cfg.at("components").get<int>());
  const json& init = cfg.at("init");
  const std::string kind = init.at("kind").get<std::string>();
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  std::optional<Field> u0;
  if (kind == "uniform") {
    u0 = random_uniform_field(grid, gl.components, init.at("low").get<double>(), init.at("high").get<double>(), seed);
  } else if (kind == "constant") {
    u0 = Field(grid, gl.components,
               std::vector<double>(grid.node_count() * gl.components, init.at("value").get<double>()));
  } else if (kind == "spike") {
    std::vector<double> v(grid.node_count() * gl.components, 0.0);
    v[(grid.node_count() / 2) * gl.components] = init.at("value").get<double>();
    u0 = Field(grid, gl.components, std::move(v));
  } else if (kind == "file") {
    u0 = read_field_file(init.at("path").get<std::string>());
    require(u0->grid() == grid, "initial field grid does not match the configured grid");
  } else {
    throw ValidationError("init.kind must be uniform, constant, spike or file, got '" + kind + "'");
  }

  const GLSteady st = solve_steady(*u0, gl);
  write_text(out / "trace.txt", format_trace(st.trace));
  write_field_file((out / "steady.fld").string(), st.u);

  std::vector<PropertyReport> reports;
  const double steady_limit = 10.0 * gl.steady_tolerance / gl.time_step;
  std::ostringstream ctx;
  ctx << describe_grid(grid) << " alpha=" << format_exact(gl.alpha) << " seed=" << seed
      << " steps=" << st.trace.records.size();
  reports.push_back(make_report("steady_state",
                                st.trace.steady ? st.trace.residual : std::numeric_limits<double>::infinity(),
                                std::nullopt, steady_limit, ctx.str()));
  reports.push_back(verify_bound(st.u));
  if (st.trace.steady) {
    const OperatorMatrix A = build_operator_matrix(grid, gl.alpha, ExteriorData::periodic());
    reports.push_back(q_chain_check(st.u, A, st.trace.residual));
  }
  write_text(out / "report.txt", format_reports(reports));
  if (!st.trace.steady) throw NumericalError("flow did not reach a steady state within max_steps");
  for (const auto& r : reports) {
    if (!r.passed) return 1;
  }
  return 0;
}

int cmd_exhaust(const json& cfg, const fs::path& out) {
  const Grid grid = grid_from(cfg.at("grid"));
  const double alpha = cfg.at("alpha").get<double>();
  ExhaustionConfig ec{cfg.at("radii").get<std::vector<double>>(),
                      source_bump(grid, cfg.at("source").at("amplitude").get<double>(),
                                  cfg.at("source").at("radius").get<double>()),
                      make_frac_params(grid.dim(), alpha), cfg.at("tolerance").get<double>()};
  const ExhaustionResult r = run_exhaustion(ec);
  write_field_file((out / "k.fld").string(), ec.k);
  write_field_file((out / "U.fld").string(), r.limit);
  write_field_file((out / "V.fld").string(), r.potential);
  write_text(out / "exhaust.txt", format_exhaustion_report(r));
  return 0;
}

int cmd_verify(const json& cfg, const fs::path& out) {
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  std::vector<PropertyReport> reports;
  auto append = [&](std::vector<PropertyReport> more) {
    for (auto& r : more) reports.push_back(std::move(r));
  };
  append(verify_kato(cfg.at("kato"), seed));
  append(verify_gl(cfg.at("gl"), seed));
  append(verify_theorem1(cfg.at("gl"), seed));
  append(verify_liouville(cfg.at("liouville"), seed));
  append(verify_exhaustion(cfg.at("exhaustion")));
  append(verify_cutoff(cfg.at("cutoff")));
  write_text(out / "reports.txt", format_reports(reports));
  int failed = 0;
  for (const auto& r : reports) {
    if (!r.passed) {
      ++failed;
      std::cerr << "fail: " << r.name << '\n';
    }
  }
  std::cout << reports.size() - failed << "/" << reports.size() << " reports passed\n";
  return failed == 0 ? 0 : 1;
}

int cmd_bench(const json& cfg, const fs::path& out) {
  const double alpha = cfg.at("alpha").get<double>();
  const double a = cfg.at("half_extent").get<double>();
  const int repeats = cfg.at("repeats").get<int>();
  require(repeats >= 1, "repeats must be at least 1");
  std::ostringstream table;
  table << "# n quadrature_s spectral_s quadrature_ratio spectral_ratio\n";
  double prev_q = 0.0;
  double prev_s = 0.0;
  for (int n : cfg.at("sizes").get<std::vector<int>>()) {
    const Grid g = make_grid(1, a, n, Topology::periodic);
    const Field f = sample(g, [a](double x, double) { return std::exp(std::sin(std::numbers::pi * x / a)); });
    const OperatorMatrix A = build_operator_matrix(g, alpha, ExteriorData::periodic());
    SpectralOperator S(g, alpha);
    const double tq = best_time([&] { (void)A.apply(f); }, repeats);
    const double ts = best_time([&] { (void)S.apply(f); }, repeats);
    table << n << ' ' << format_exact(tq) << ' ' << format_exact(ts) << ' ';
    if (prev_q > 0.0) {
      table << format_exact(tq / prev_q) << ' ' << format_exact(ts / prev_s);
    } else {
      table << "- -";
    }
    table << '\n';
    prev_q = tq;
    prev_s = ts;
  }
  std::cout << table.str();
  write_text(out / "bench.txt", table.str());
  return 0;
}

int execute(const std::string& subcommand, const json& cfg, const fs::path& out) {
  try {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw ValidationError("cannot create output directory " + out.string() + ": " + ec.message());
    json manifest = cfg;
    manifest["subcommand"] = subcommand;
    write_text(out / "manifest.json", manifest.dump(2) + "\n");
    if (subcommand == "apply") return cmd_apply(cfg, out);
    if (subcommand == "gl") return cmd_gl(cfg, out);
    if (subcommand == "exhaust") return cmd_exhaust(cfg, out);
    if (subcommand == "verify") return cmd_verify(cfg, out);
    if (subcommand == "bench") return cmd_bench(cfg, out);
    throw ValidationError("unknown subcommand '" + subcommand + "'");
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: bad config value: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Fractional Laplacian toolkit: operators, Ginzburg-Landau flow, ball exhaustion, property checks"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out = ".";
  Overrides ov;
  std::uint64_t seed = 0;
  int grid_n = 0;
  double alpha = 0.0;
  double half_extent = 0.0;
  std::string input;

  const char* names[] = {"apply", "gl", "exhaust", "verify", "bench"};
  const char* help[] = {"apply the operator to a field file", "run the Ginzburg-Landau flow to a steady state",
                        "ball exhaustion for the exterior problem", "run the property suite",
                        "time quadrature and spectral application"};
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_opt, n_opt, alpha_opt, extent_opt, input_opt;
  for (int k = 0; k < 5; ++k) {
    CLI::App* s = app.add_subcommand(names[k], help[k]);
    s->add_option("--config", config_path, "JSON config; defaults fill missing keys");
    s->add_option("--out", out, "output directory")->capture_default_str();
    seed_opt.push_back(s->add_option("--seed", seed, "master seed"));
    n_opt.push_back(s->add_option("--grid-n", grid_n, "points per axis"));
    alpha_opt.push_back(s->add_option("--alpha", alpha, "operator order in (0, 2)"));
    extent_opt.push_back(s->add_option("--half-extent", half_extent, "grid half extent"));
    input_opt.push_back(k == 0 ? s->add_option("--input", input, "input field file") : nullptr);
    subs.push_back(s);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (int k = 0; k < 5; ++k) {
    if (!subs[k]->parsed()) continue;
    if (seed_opt[k]->count()) ov.seed = seed;
    if (n_opt[k]->count()) ov.grid_n = grid_n;
    if (alpha_opt[k]->count()) ov.alpha = alpha;
    if (extent_opt[k]->count()) ov.half_extent = half_extent;
    if (input_opt[k] && input_opt[k]->count()) ov.input = input;
    json cfg;
    try {
      cfg = resolve_config(names[k], config_path, ov);
    } catch (const ValidationError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    } catch (const json::exception& e) {
      std::cerr << "error: bad config value: " << e.what() << '\n';
      return 2;
    }
    return execute(names[k], cfg, out);
  }
  return 2;
}

}  // namespace fraclap::cli
