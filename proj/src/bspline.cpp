#include "lpqtem/bspline.hpp"

#include "lpqtem/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace lpq {

namespace {

constexpr int kMaxOrder = 32;

// Uniform B-spline with knots 0..n evaluated at u (Cox-de Boor triangle).
double cardinal(int n, double u) {
  if (!(u >= 0.0) || !(u < n)) return 0.0;
  std::array<double, kMaxOrder + 1> a{};
  const int i = int(std::floor(u));
  a[i] = 1.0;
  for (int m = 2; m <= n; ++m) {
    for (int j = 0; j < n; ++j) {
      const double v = u - j;
      a[j] = (v * a[j] + (m - v) * a[j + 1]) / (m - 1);
    }
  }
  return a[0];
}

void check_order(int order) {
  if (order < 1 || order > kMaxOrder)
    throw InputError("B-spline order must lie in [1, " + std::to_string(kMaxOrder) + "], got " +
                     std::to_string(order));
}

}  // namespace

double bspline_eval(int order, double x) {
  check_order(order);
  if (order == 2) {
    const double ax = std::abs(x);
    return ax < 1.0 ? 1.0 - ax : 0.0;
  }
  return cardinal(order, x + 0.5 * order);
}

double bspline_integral(int order, double x) {
  check_order(order);
  const double r = 0.5 * order;
  if (x <= -r) return 0.0;
  if (x >= r) return 1.0;
  if (order == 2) return x < 0 ? 0.5 * (1 + x) * (1 + x) : 1.0 - 0.5 * (1 - x) * (1 - x);
  double s = 0.0;
  for (int k = 0; k <= order; ++k) s += cardinal(order + 1, x - 0.5 - k + 0.5 * (order + 1));
  return s;
}

std::vector<double> bspline_autocorrelation(int order) {
  check_order(order);
  if (2 * order > kMaxOrder) throw InputError("B-spline order too large for autocorrelation");
  std::vector<double> a(order);
  for (int j = 0; j < order; ++j) a[j] = cardinal(2 * order, j + order);
  return a;
}

double bspline_knot_offset(int order) { return order % 2 == 0 ? 0.0 : 0.5; }

}  // namespace lpq
