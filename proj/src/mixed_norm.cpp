#include "lpqtem/mixed_norm.hpp"

#include "lpqtem/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace lpq {

int max_threads() { return omp_get_max_threads(); }

namespace {

void check_exponent(double r, const char* name) {
  if (!(r >= 1.0)) throw InputError(std::string("exponent ") + name + " must lie in [1, inf]");
}

}  // namespace

double MixedNormParams::conjugate_of(double r) {
  check_exponent(r, "r");
  if (r == 1.0) return kInf;
  if (std::isinf(r)) return 1.0;
  return r / (r - 1.0);
}

MixedNormParams::MixedNormParams(double p, double q) : p_(p), q_(q) {
  check_exponent(p, "p");
  check_exponent(q, "q");
  pc_ = conjugate_of(p);
  qc_ = conjugate_of(q);
}

std::vector<double> quadrature_weights(const Axis& a) {
  const int n = a.intervals;
  const double h = a.step();
  std::vector<double> w(n + 1);
  if (n % 2 == 0) {
    for (int i = 0; i <= n; ++i) w[i] = (i == 0 || i == n) ? h / 3 : (i % 2 ? 4 * h / 3 : 2 * h / 3);
  } else {
    for (int i = 0; i <= n; ++i) w[i] = (i == 0 || i == n) ? h / 2 : h;
  }
  return w;
}

double weighted_lr(std::span<const double> v, std::span<const double> w, double r) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (std::isinf(r) || m == 0.0) return m;
  double s = 0.0;
  if (r == 1.0) {
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::abs(v[i]);
    return s;
  }
  if (r == 2.0) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double t = v[i] / m;
      s += w[i] * t * t;
    }
    return m * std::sqrt(s);
  }
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::pow(std::abs(v[i]) / m, r);
  return m * std::pow(s, 1.0 / r);
}

double mixed_function_norm(const GridFunction& f, const MixedNormParams& pq, Exec exec) {
  const Grid& g = f.grid();
  if (g.size() == 0) throw InputError("mixed_function_norm: empty grid");
  f.require_finite();
  const auto wx = quadrature_weights(g.x);
  const auto wy = quadrature_weights(g.y);
  const int nx = g.nx();
  std::vector<double> rows(nx);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < nx; ++i) rows[i] = weighted_lr(f.row(i), wy, pq.q());
  return weighted_lr(rows, wx, pq.p());
}

double mixed_sequence_norm(const CoefSeq& c, const MixedNormParams& pq) {
  const Window& w = c.window();
  if (w.empty()) throw InputError("mixed_sequence_norm: empty window");
  c.require_finite();
  const std::vector<double> ones(std::max(w.n1(), w.n2()), 1.0);
  std::vector<double> rows(w.n1());
  for (int i = 0; i < w.n1(); ++i)
    rows[i] = weighted_lr(c.values().subspan(std::size_t(i) * w.n2(), w.n2()), ones, pq.q());
  return weighted_lr(rows, ones, pq.p());
}

double duality_pairing(const GridFunction& f, const GridFunction& g, Exec exec) {
  if (!(f.grid() == g.grid())) throw InputError("duality_pairing: grid mismatch");
  f.require_finite();
  g.require_finite();
  const Grid& gr = f.grid();
  const auto wx = quadrature_weights(gr.x);
  const auto wy = quadrature_weights(gr.y);
  const int nx = gr.nx(), ny = gr.ny();
  std::vector<double> rows(nx);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < nx; ++i) {
    double s = 0.0;
    for (int j = 0; j < ny; ++j) s += wy[j] * f.at(i, j) * g.at(i, j);
    rows[i] = s;
  }
  double s = 0.0;
  for (int i = 0; i < nx; ++i) s += wx[i] * rows[i];
  return s;
}

double integrate(const GridFunction& f) {
  GridFunction one(f.grid(), 1.0);
  return duality_pairing(f, one, Exec::serial);
}

}  // namespace lpq
