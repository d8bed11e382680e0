#include "lpqtem/reference.hpp"

#include "lpqtem/errors.hpp"

#include <cmath>

namespace lpq::reference {

GridFunction render_pointwise(const VSignal& f, const Grid& grid) {
  GridFunction out(grid);
  for (int i = 0; i < grid.nx(); ++i)
    for (int j = 0; j < grid.ny(); ++j) out.at(i, j) = f(grid.x.at(i), grid.y.at(j));
  return out;
}

CoefSeq analysis_pointwise(const SpanKernel& k, const GridFunction& f) {
  const Grid& grid = f.grid();
  const auto wx = quadrature_weights(grid.x);
  const auto wy = quadrature_weights(grid.y);
  const Window& w = k.window();
  const DualGenerator& d = k.dual();
  CoefSeq c(w);
  for (int a = w.k1_lo; a <= w.k1_hi; ++a)
    for (int b = w.k2_lo; b <= w.k2_hi; ++b) {
      double s = 0.0;
      for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j)
          s += wx[i] * wy[j] * f.at(i, j) * d(grid.x.at(i) - a, grid.y.at(j) - b);
      c(a, b) = s;
    }
  return k.is_identity() ? c : k.apply(c);
}

double mixed_norm_direct(const GridFunction& f, const MixedNormParams& pq) {
  const Grid& grid = f.grid();
  const auto wx = quadrature_weights(grid.x);
  const auto wy = quadrature_weights(grid.y);
  const double p = pq.p(), q = pq.q();
  double outer = 0.0;
  for (int i = 0; i < grid.nx(); ++i) {
    double inner = 0.0;
    for (int j = 0; j < grid.ny(); ++j) {
      const double v = std::abs(f.at(i, j));
      inner = std::isinf(q) ? std::max(inner, v) : inner + wy[j] * std::pow(v, q);
    }
    if (!std::isinf(q)) inner = std::pow(inner, 1.0 / q);
    outer = std::isinf(p) ? std::max(outer, inner) : outer + wx[i] * std::pow(inner, p);
  }
  return std::isinf(p) ? outer : std::pow(outer, 1.0 / p);
}

}  // namespace lpq::reference
