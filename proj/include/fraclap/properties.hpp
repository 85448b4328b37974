#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fraclap/constants.hpp"
#include "fraclap/gl.hpp"
#include "fraclap/operator_matrix.hpp"
#include "fraclap/report.hpp"

namespace fraclap {

/// A|f| - sgn(f) A f <= 0 nodewise. A must have zero or periodic exterior data.
PropertyReport kato_check(const Field& f, const OperatorMatrix& A, double tolerance = 1e-12);

/// A f_+ - sgn(f_+) A f <= 0 nodewise, with sgn(0) = 0.
PropertyReport positive_part_check(const Field& f, const OperatorMatrix& A, double tolerance = 1e-12);

/// Raw quantities of the chain A(|u|^2) <= 2 u.Au, A Q <= -2Q^2 - 2Q, A Q_+ <= -2 Q_+^2.
struct QChainAnalysis {
  /// max |A(|u|^2) - 2 u.Au + Gamma(u)|.
  double identity_defect = 0.0;
  /// max (A(|u|^2) - 2 u.Au)_+.
  double first_violation = 0.0;
  /// max (A Q + 2 Q^2 + 2 Q)_+.
  double second_violation = 0.0;
  /// max (A Q_+ + 2 Q_+^2)_+.
  double third_violation = 0.0;
  std::optional<std::size_t> worst_node;
  /// sup |A u - u (1 - |u|^2)| with this operator.
  double rho = 0.0;
  double sup_q_plus = 0.0;
  /// Tolerance for the equation-dependent inequalities: 10 rho max(1, sup|u|) + 1e-12.
  double equation_tolerance = 0.0;
};

/// Exterior data of the operator are transported consistently: u's exterior g gives
/// |u|^2 exterior N g^2, Q exterior N g^2 - 1 and Q_+ exterior (N g^2 - 1)_+.
/// Refuses (ValidationError) unless steady_residual <= certify_limit.
QChainAnalysis q_chain_analysis(const Field& u, const OperatorMatrix& A, double steady_residual,
                                double certify_limit = 1e-6);

/// Report over the analysis: worst_violation is the largest ratio of a violation to its
/// tolerance (identity and first inequality at 1e-12, the rest at equation_tolerance);
/// passes iff that ratio is <= 1.
PropertyReport q_chain_check(const Field& u, const OperatorMatrix& A, double steady_residual,
                             double certify_limit = 1e-6);

/// Nonnegative f claimed to satisfy (-Delta)^{alpha/2} f + f^r <= 0 and to lie in L^q.
struct SubsolutionCandidate {
  Field f;
  double r = 2.0;
  double q = 2.0;
  bool certified = false;
};

struct Certification {
  bool certified = false;
  /// max_i (A f + f^r)_i and where it occurs.
  double max_excess = 0.0;
  std::size_t node = 0;
};

/// Evaluates A f + f^r nodewise (A with zero or periodic exterior); certified iff
/// every entry is <= 0. Also sets candidate.certified.
Certification certify(SubsolutionCandidate& candidate, const OperatorMatrix& A);

/// Discrete Liouville check. A certified candidate must have
/// T(f) = <f, xi_R> + <xi_R f^r, phi> <= tolerance and sup f <= tolerance; a candidate
/// that fails certification passes and carries its violating node. The test
/// integral T needs dim > alpha; otherwise it is skipped and the context says so.
PropertyReport liouville_certificate(SubsolutionCandidate& candidate, double R, const FracParams& params,
                                     const OperatorMatrix& A, double tolerance = 1e-8);

struct FeasibilityResult {
  int restarts = 0;
  int iterations = 0;
  /// Largest sup f over iterates satisfying f >= 0 and A f + f^r <= 0 exactly.
  double best_feasible_sup = 0.0;
  long feasible_iterates = 0;
  /// Largest sup f of a starting point.
  double max_start_sup = 0.0;
};

/// Projected gradient ascent of sum f - (mu/2) sum (A f + f^r)_+^2 over f >= 0,
/// from random starts of amplitude 10^U(-6, 1). Restart seeds derive from seed.
FeasibilityResult feasibility_search(const OperatorMatrix& A, double r, int restarts, int iterations,
                                     std::uint64_t seed);

struct ContrapositiveSweep {
  int candidates = 0;
  /// Candidates with sup f > 1e-6 for which certification failed with a violating node.
  int refuted = 0;
};

/// Random nonnegative candidates (dense or sparse) with sup f in [1e-6, 10]; each
/// should fail certification.
ContrapositiveSweep contrapositive_sweep(const OperatorMatrix& A, double r, int count, std::uint64_t seed);

struct Theorem1Options {
  double tolerance = 1e-6;
  /// Cutoff scale for the Liouville test function; 0 selects half_extent / 3.
  double cutoff_scale = 0.0;
};

struct Theorem1Result {
  GLSteady steady;
  std::vector<PropertyReport> stages;
  PropertyReport overall;
  double sup_q_plus = 0.0;
};

/// solve_steady -> q_chain_check -> liouville_certificate on Q_+ (r = q = 2) ->
/// sup Q_+ <= tolerance. The quadrature operator used by the chain is the periodic
/// one on u0's grid.
Theorem1Result theorem1_pipeline(const Field& u0, const GLConfig& cfg, const Theorem1Options& options = {});

}  // namespace fraclap
