#pragma once

#include <vector>

namespace lpq {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule with n points, nodes by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

// Integrate fn over [a, b] with the rule mapped affinely.
template <class F>
double gauss_integrate(const GaussRule& r, double a, double b, F&& fn) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * fn(c + h * r.nodes[i]);
  return h * s;
}

}  // namespace lpq
