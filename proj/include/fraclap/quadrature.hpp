#pragma once

#include <vector>

namespace fraclap {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points (Newton iteration on P_n).
const GaussRule& gauss_legendre(int n);

/// Integrates fn over [a, b] with the n-point Gauss-Legendre rule.
template <class Fn>
double integrate_gl(Fn&& fn, double a, double b, int n = 16) {
  const GaussRule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * fn(mid + half * rule.nodes[k]);
  return s * half;
}

}  // namespace fraclap
