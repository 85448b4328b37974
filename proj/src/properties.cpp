#include "fraclap/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fraclap/error.hpp"
#include "fraclap/io.hpp"
#include "fraclap/potential.hpp"

namespace fraclap {

namespace {

void require_homogeneous(const OperatorMatrix& A, const Field& f) {
  require(f.grid() == A.grid(), "field grid does not match the operator grid");
  require(f.components() == 1, "expected a scalar field");
  const auto kind = A.exterior().kind();
  require(kind == ExteriorData::Kind::zero || kind == ExteriorData::Kind::periodic,
          "check needs zero or periodic exterior data so that |f| and f_+ have a consistent exterior");
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Field map_values(const Field& f, double (*fn)(double)) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x = fn(x);
  return Field(f.grid(), f.components(), std::move(v));
}

PropertyReport excess_report(const char* name, const Field& lhs, const Field& f, const Field& Af, double tolerance,
                             double (*sign_of)(double)) {
  double worst = 0.0;
  std::size_t node = 0;
  for (std::size_t i = 0; i < f.node_count(); ++i) {
    const double excess = lhs(i) - sign_of(f(i)) * Af(i);
    if (excess > worst) {
      worst = excess;
      node = i;
    }
  }
  std::ostringstream ctx;
  ctx << "nodes=" << f.node_count() << " h=" << format_exact(f.grid().spacing());
  return make_report(name, worst, worst > tolerance ? std::optional(node) : std::nullopt, tolerance, ctx.str());
}

double positive(double v) { return std::max(v, 0.0); }
double absolute(double v) { return std::abs(v); }
double sgn_positive_part(double v) { return v > 0.0 ? 1.0 : 0.0; }

}  // namespace

PropertyReport kato_check(const Field& f, const OperatorMatrix& A, double tolerance) {
  require_homogeneous(A, f);
  const Field Af = A.apply(f);
  const Field A_abs = A.apply(map_values(f, absolute));
  return excess_report("kato", A_abs, f, Af, tolerance, sgn);
}

PropertyReport positive_part_check(const Field& f, const OperatorMatrix& A, double tolerance) {
  require_homogeneous(A, f);
  const Field Af = A.apply(f);
  const Field A_pos = A.apply(map_values(f, positive));
  return excess_report("kato_positive_part", A_pos, f, Af, tolerance, sgn_positive_part);
}

QChainAnalysis q_chain_analysis(const Field& u, const OperatorMatrix& A, double steady_residual,
                                double certify_limit) {
  require(u.grid() == A.grid(), "field grid does not match the operator grid");
  require(A.exterior().kind() != ExteriorData::Kind::radial, "q-chain needs zero, constant or periodic exterior data");
  if (!(steady_residual <= certify_limit)) {
    throw ValidationError("field is not a certified steady state (residual " + format_exact(steady_residual) +
                          " > " + format_exact(certify_limit) + "); the chain uses the equation");
  }
  const std::size_t nodes = u.node_count();
  const int comps = u.components();
  const double g = A.exterior().value();
  const double g2 = comps * g * g;

  std::vector<double> s(nodes), q(nodes), qp(nodes);
  double sup_u = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double m = u.magnitude(i);
    sup_u = std::max(sup_u, m);
    s[i] = m * m;
    q[i] = s[i] - 1.0;
    qp[i] = std::max(q[i], 0.0);
  }
  const Field S(u.grid(), 1, s);
  const Field Q(u.grid(), 1, q);
  const Field Qp(u.grid(), 1, qp);
  const Field AS = A.apply_with_exterior(S, g2);
  const Field AU = A.apply_with_exterior(u, g);
  const Field AQ = A.apply_with_exterior(Q, g2 - 1.0);
  const Field AQp = A.apply_with_exterior(Qp, std::max(g2 - 1.0, 0.0));
  const Field gamma = carre_du_champ(u, A);

  QChainAnalysis out;
  double worst_ratio = -1.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    double two_u_au = 0.0;
    for (int c = 0; c < comps; ++c) {
      two_u_au += 2.0 * u(i, c) * AU(i, c);
      out.rho = std::max(out.rho, std::abs(AU(i, c) - u(i, c) * (1.0 - s[i])));
    }
    out.identity_defect = std::max(out.identity_defect, std::abs(AS(i) - two_u_au + gamma(i)));
    out.first_violation = std::max(out.first_violation, AS(i) - two_u_au);
    out.second_violation = std::max(out.second_violation, AQ(i) + 2.0 * q[i] * q[i] + 2.0 * q[i]);
    const double third = AQp(i) + 2.0 * qp[i] * qp[i];
    if (third > worst_ratio) {
      worst_ratio = third;
      out.worst_node = i;
    }
    out.third_violation = std::max(out.third_violation, third);
    out.sup_q_plus = std::max(out.sup_q_plus, qp[i]);
  }
  out.first_violation = std::max(out.first_violation, 0.0);
  out.second_violation = std::max(out.second_violation, 0.0);
  out.third_violation = std::max(out.third_violation, 0.0);
  out.equation_tolerance = 10.0 * out.rho * std::max(1.0, sup_u) + 1e-12;
  return out;
}

PropertyReport q_chain_check(const Field& u, const OperatorMatrix& A, double steady_residual, double certify_limit) {
  const QChainAnalysis a = q_chain_analysis(u, A, steady_residual, certify_limit);
  constexpr double kAlgebraTolerance = 1e-12;
  const double ratio = std::max({a.identity_defect / kAlgebraTolerance, a.first_violation / kAlgebraTolerance,
                                 a.second_violation / a.equation_tolerance, a.third_violation / a.equation_tolerance});
  std::ostringstream ctx;
  ctx << "identity_defect=" << format_exact(a.identity_defect) << " first=" << format_exact(a.first_violation)
      << " second=" << format_exact(a.second_violation) << " third=" << format_exact(a.third_violation)
      << " rho=" << format_exact(a.rho) << " equation_tol=" << format_exact(a.equation_tolerance)
      << " sup_Q+=" << format_exact(a.sup_q_plus) << " (ratio to tolerance reported)";
  return make_report("q_chain", ratio, ratio > 1.0 ? a.worst_node : std::nullopt, 1.0, ctx.str());
}

Certification certify(SubsolutionCandidate& candidate, const OperatorMatrix& A) {
  require_homogeneous(A, candidate.f);
  require(candidate.r >= 1.0, "subsolution exponent r must be >= 1");
  require(candidate.q >= 1.0, "integrability index q must be >= 1");
  for (double v : candidate.f.values()) require(v >= 0.0, "subsolution candidate must be nonnegative");
  const Field Af = A.apply(candidate.f);
  Certification c;
  c.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidate.f.node_count(); ++i) {
    const double e = Af(i) + std::pow(candidate.f(i), candidate.r);
    if (e > c.max_excess) {
      c.max_excess = e;
      c.node = i;
    }
  }
  c.certified = c.max_excess <= 0.0;
  candidate.certified = c.certified;
  return c;
}

PropertyReport liouville_certificate(SubsolutionCandidate& candidate, double R, const FracParams& params,
                                     const OperatorMatrix& A, double tolerance) {
  require(params.dim == candidate.f.grid().dim(), "FracParams dimension does not match the grid");
  const Certification cert = certify(candidate, A);
  const FieldNorms norms = field_norms(candidate.f, candidate.q);
  std::ostringstream ctx;
  ctx << "r=" << format_exact(candidate.r) << " q=" << format_exact(candidate.q)
      << " Lq=" << format_exact(norms.lq_norm) << " sup_f=" << format_exact(norms.sup_norm)
      << " max(Af+f^r)=" << format_exact(cert.max_excess);
  if (!cert.certified) {
    ctx << " not certified: subsolution inequality fails at node " << cert.node;
    return make_report("liouville", 0.0, cert.node, tolerance, ctx.str());
  }
  double worst = norms.sup_norm;
  if (params.c_inverse) {
    const CutoffPotential cp = cutoff_potential(R, params, candidate.f.grid());
    const double vol = candidate.f.grid().cell_volume();
    double t1 = 0.0;
    double t2 = 0.0;
    for (std::size_t i = 0; i < candidate.f.node_count(); ++i) {
      const double f = candidate.f(i);
      t1 += f * cp.xi(i);
      t2 += cp.xi(i) * std::pow(f, candidate.r) * cp.phi(i);
    }
    const double T = (t1 + t2) * vol;
    ctx << " certified T=" << format_exact(T) << " (<f,xi_R>=" << format_exact(t1 * vol)
        << ", <xi_R f^r,phi>=" << format_exact(t2 * vol) << ") R=" << format_exact(R);
    worst = std::max(worst, T);
  } else {
    ctx << " certified; test potential unavailable for dim <= alpha, T skipped";
  }
  return make_report("liouville", worst, std::nullopt, tolerance, ctx.str());
}

FeasibilityResult feasibility_search(const OperatorMatrix& A, double r, int restarts, int iterations,
                                     std::uint64_t seed) {
  require(A.exterior().kind() == ExteriorData::Kind::zero || A.exterior().kind() == ExteriorData::Kind::periodic,
          "feasibility search needs zero or periodic exterior data");
  require(r >= 1.0 && restarts >= 1 && iterations >= 1, "invalid feasibility search parameters");
  const Eigen::MatrixXd M = A.dense();
  const Eigen::Index n = M.rows();
  const double lambda = M.cwiseAbs().rowwise().sum().maxCoeff();  // bound on the spectral radius
  constexpr double mu = 1e3;

  FeasibilityResult res;
  res.restarts = restarts;
  res.iterations = iterations;
  std::seed_seq seq{seed};
  std::vector<std::uint64_t> seeds(restarts);
  seq.generate(seeds.begin(), seeds.end());

  Eigen::VectorXd f(n), c(n), cp(n), grad(n);
  for (int k = 0; k < restarts; ++k) {
    std::mt19937_64 rng(seeds[k]);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double amplitude = std::pow(10.0, -6.0 + 7.0 * unit(rng));
    for (Eigen::Index i = 0; i < n; ++i) f[i] = amplitude * unit(rng);
    res.max_start_sup = std::max(res.max_start_sup, f.maxCoeff());
    for (int it = 0; it < iterations; ++it) {
      c = M * f;
      for (Eigen::Index i = 0; i < n; ++i) c[i] += std::pow(f[i], r);
      if (c.maxCoeff() <= 0.0) {
        ++res.feasible_iterates;
        res.best_feasible_sup = std::max(res.best_feasible_sup, f.maxCoeff());
      }
      cp = c.cwiseMax(0.0);
      grad = M * cp;
      double curvature = lambda * lambda;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double dfr = r * std::pow(f[i], r - 1.0);
        grad[i] += dfr * cp[i];
        curvature = std::max(curvature, (lambda + dfr) * (lambda + dfr));
      }
      const double step = 0.5 / (mu * curvature);
      f = (f + step * (Eigen::VectorXd::Ones(n) - mu * grad)).cwiseMax(0.0);
    }
  }
  return res;
}

ContrapositiveSweep contrapositive_sweep(const OperatorMatrix& A, double r, int count, std::uint64_t seed) {
  const Grid& grid = A.grid();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ContrapositiveSweep out;
  for (int k = 0; k < count; ++k) {
    const double amplitude = std::pow(10.0, -6.0 + 7.0 * unit(rng));
    const bool sparse = (k % 2) == 1;
    std::vector<double> v(grid.node_count(), 0.0);
    for (double& x : v) {
      if (!sparse || unit(rng) < 0.1) x = amplitude * unit(rng);
    }
    v[static_cast<std::size_t>(unit(rng) * v.size()) % v.size()] = amplitude;
    SubsolutionCandidate cand{Field(grid, 1, std::move(v)), r, 2.0};
    if (field_norms(cand.f).sup_norm <= 1e-6) continue;
    ++out.candidates;
    const Certification c = certify(cand, A);
    if (!c.certified && c.max_excess > 0.0) ++out.refuted;
  }
  return out;
}

Theorem1Result theorem1_pipeline(const Field& u0, const GLConfig& cfg, const Theorem1Options& options) {
  Theorem1Result out{solve_steady(u0, cfg), {}, {}};
  const Grid& grid = u0.grid();
  const GLTrace& trace = out.steady.trace;
  const double steady_limit = 10.0 * cfg.steady_tolerance / cfg.time_step;
  std::ostringstream ctx;
  ctx << "steps=" << trace.records.size() << " residual=" << format_exact(trace.residual)
      << " alpha=" << format_exact(cfg.alpha) << " dt=" << format_exact(cfg.time_step);
  out.stages.push_back(make_report("steady_state", trace.steady ? trace.residual : std::numeric_limits<double>::infinity(),
                                   std::nullopt, steady_limit, ctx.str()));

  auto finish = [&](const std::string& failed_stage) {
    const bool ok = failed_stage.empty();
    std::ostringstream c;
    c << (ok ? "all stages passed" : "failed stage: " + failed_stage) << " sup_Q+=" << format_exact(out.sup_q_plus);
    out.overall = make_report("theorem1_pipeline", ok ? out.sup_q_plus : std::numeric_limits<double>::infinity(),
                              std::nullopt, options.tolerance, c.str());
    return out;
  };
  if (!out.stages.back().passed) return finish("steady_state");

  const Field& u = out.steady.u;
  const OperatorMatrix A = build_operator_matrix(grid, cfg.alpha, ExteriorData::periodic());
  out.stages.push_back(q_chain_check(u, A, trace.residual));
  if (!out.stages.back().passed) return finish("q_chain");

  std::vector<double> qp(u.node_count());
  for (std::size_t i = 0; i < qp.size(); ++i) {
    const double m = u.magnitude(i);
    qp[i] = std::max(m * m - 1.0, 0.0);
    out.sup_q_plus = std::max(out.sup_q_plus, qp[i]);
  }
  SubsolutionCandidate cand{Field(grid, 1, std::move(qp)), 2.0, 2.0};
  const FracParams params = make_frac_params(grid.dim(), cfg.alpha);
  const double R = options.cutoff_scale > 0.0 ? options.cutoff_scale : grid.half_extent() / 3.0;
  out.stages.push_back(liouville_certificate(cand, R, params, A, options.tolerance));
  if (!out.stages.back().passed) return finish("liouville");

  out.stages.push_back(make_report("sup_Q_plus", out.sup_q_plus, std::nullopt, options.tolerance,
                                   "Q = |u|^2 - 1 on the steady state"));
  if (!out.stages.back().passed) return finish("sup_Q_plus");
  return finish("");
}

}  // namespace fraclap
