#pragma once

#include <vector>

namespace lpq {

// Centered cardinal B-spline of the given order (order 1 = box on [-1/2, 1/2)).
double bspline_eval(int order, double x);

// Integral of bspline_eval(order, .) over (-inf, x].
double bspline_integral(int order, double x);

// Autocorrelation a(j) = <beta, beta(. - j)> for j = 0..order-1 (a(j) = 0 beyond).
std::vector<double> bspline_autocorrelation(int order);

// Knots sit on integers for even order and half-integers for odd order.
double bspline_knot_offset(int order);

}  // namespace lpq
