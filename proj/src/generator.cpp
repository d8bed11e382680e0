#include "lpqtem/generator.hpp"

#include "lpqtem/bspline.hpp"
#include "lpqtem/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <ostream>
#include <tuple>
#include <string>

namespace lpq {

Generator::Generator(int ot, int os) : ot_(ot), os_(os) {
  if (ot < 2 || os < 2)
    throw InputError("generator orders must be >= 2 (continuity), got " + std::to_string(ot) +
                     ", " + std::to_string(os));
}

Generator::Generator(int ot, int os, bool) : ot_(ot), os_(os) {}

Generator Generator::orthonormal_box() { return Generator(1, 1, true); }

double Generator::t(double x) const { return bspline_eval(ot_, x); }
double Generator::s(double y) const { return bspline_eval(os_, y); }
double Generator::integral_t(double x) const { return bspline_integral(ot_, x); }
double Generator::integral_s(double y) const { return bspline_integral(os_, y); }

namespace {

constexpr double kTruncate = 1e-14;
constexpr double kTailMax = 1e-10;
constexpr double kSymbolMin = 1e-8;

double symbol(const std::vector<double>& a, double xi) {
  double s = a[0];
  for (std::size_t j = 1; j < a.size(); ++j) s += 2.0 * a[j] * std::cos(double(j) * xi);
  return s;
}

}  // namespace

std::pair<double, double> gram_symbol_bounds(const std::vector<double>& a) {
  if (a.empty()) throw InputError("empty autocorrelation");
  double lo = 1e300, hi = 0.0;
  const int dense = 4096;
  for (int i = 0; i <= dense; ++i) {
    const double v = symbol(a, std::numbers::pi * i / dense);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo >= kSymbolMin))
    throw SingularGeneratorError("Gram symbol lower bound " + std::to_string(lo) + " below 1e-8");
  return {lo, hi};
}

SplineDual1D::SplineDual1D(int order, int L) : order_(order) {
  if (L < 4) throw InputError("ring size must be >= 4");
  const auto a = bspline_autocorrelation(order);

  std::tie(smin_, smax_) = gram_symbol_bounds(a);

  std::vector<double> inv(L);
  for (int l = 0; l < L; ++l) inv[l] = 1.0 / symbol(a, 2.0 * std::numbers::pi * l / L);
  const int half = L / 2;
  std::vector<double> ring(half + 1);
  for (int m = 0; m <= half; ++m) {
    double s = 0.0;
    for (int l = 0; l < L; ++l) s += std::cos(2.0 * std::numbers::pi * double(l) * m / L) * inv[l];
    ring[m] = s / L;
  }
  int R = half;
  while (R > 0 && std::abs(ring[R]) < kTruncate) --R;
  radius_ = R;
  // Aliasing on the ring is of the order of the value at the antipode.
  tail_ = std::abs(ring[half]);
  for (int m = R + 1; m <= half; ++m) tail_ = std::max(tail_, std::abs(ring[m]));
  if (tail_ > kTailMax)
    throw WindowGrowthError("dual tail bound " + std::to_string(tail_) +
                            " above 1e-10 at ring size " + std::to_string(L));
  b_.assign(2 * R + 1, 0.0);
  for (int m = -R; m <= R; ++m) b_[m + R] = ring[std::abs(m)];
  refresh();
}

void SplineDual1D::refresh() {
  prefix_.assign(b_.size() + 1, 0.0);
  for (std::size_t i = 0; i < b_.size(); ++i) prefix_[i + 1] = prefix_[i] + b_[i];
  const auto a = bspline_autocorrelation(order_);
  const int na = int(a.size());
  auto acorr = [&](int j) { return std::abs(j) < na ? a[std::abs(j)] : 0.0; };
  resid_ = 0.0;
  for (int j = -radius_ - na; j <= radius_ + na; ++j) {
    double s = 0.0;
    for (int m = -radius_; m <= radius_; ++m) s += b(m) * acorr(j - m);
    resid_ = std::max(resid_, std::abs(s - (j == 0 ? 1.0 : 0.0)));
  }
}

void SplineDual1D::corrupt(int m, double delta) {
  if (m < -radius_ || m > radius_) throw InputError("corrupt: index outside the dual window");
  b_[m + radius_] += delta;
  refresh();
}

double SplineDual1D::l1() const {
  double s = 0.0;
  for (double v : b_) s += std::abs(v);
  return s;
}

double SplineDual1D::operator()(double x) const {
  const double r = 0.5 * order_;
  const int lo = std::max(-radius_, int(std::floor(x - r)));
  const int hi = std::min(radius_, int(std::ceil(x + r)));
  double s = 0.0;
  for (int m = lo; m <= hi; ++m) s += b_[m + radius_] * bspline_eval(order_, x - m);
  return s;
}

double SplineDual1D::integral(double x) const {
  const double r = 0.5 * order_;
  const int full = std::min(radius_, int(std::floor(x - r)));
  double s = full >= -radius_ ? prefix_[full + radius_ + 1] : 0.0;
  const int lo = std::max(-radius_, full + 1);
  const int hi = std::min(radius_, int(std::ceil(x + r)));
  for (int m = lo; m <= hi; ++m) s += b_[m + radius_] * bspline_integral(order_, x - m);
  return s;
}

DualGenerator::DualGenerator(const Generator& g, int ring_size)
    : t_(g.order_t(), ring_size), s_(g.order_s(), ring_size) {}

CoefSeq DualGenerator::coefficients() const {
  CoefSeq c(Window{-t_.radius(), t_.radius(), -s_.radius(), s_.radius()});
  for (int i = -t_.radius(); i <= t_.radius(); ++i)
    for (int j = -s_.radius(); j <= s_.radius(); ++j) c(i, j) = t_.b(i) * s_.b(j);
  return c;
}

double DualGenerator::tail_bound() const {
  return std::max(t_.tail_bound() * s_.b(0), s_.tail_bound() * t_.b(0));
}

double DualGenerator::biorthogonality_residual() const {
  // <phi~, phi(.-j)> factors; the worst entry is bounded by the product of per-axis worsts.
  const double rt = t_.biorthogonality_residual(), rs = s_.biorthogonality_residual();
  return rt + rs + rt * rs;
}

DualGenerator dual_generator(const Generator& g, int ring_size) {
  return DualGenerator(g, ring_size);
}

DualGenerator dual_generator_auto(const Generator& g, int ring_size, int max_ring) {
  for (int L = ring_size;; L *= 2) {
    try {
      return DualGenerator(g, L);
    } catch (const WindowGrowthError&) {
      if (2 * L > max_ring) throw;
    }
  }
}

GeneratorInfo generator_info(const Generator& g, const DualGenerator& d) {
  GeneratorInfo info;
  info.m = d.t().symbol_min() * d.s().symbol_min();
  info.M = d.t().symbol_max() * d.s().symbol_max();
  info.amalgam_norm_phi = amalgam_norm(g, generator_cells(g));
  info.amalgam_norm_dual = amalgam_norm(d, dual_cells(d));
  return info;
}

double amalgam_norm(const Fn2& f, const Window& cells, int spu) {
  if (spu < 1) throw InputError("amalgam_norm: samples per unit must be positive");
  double total = 0.0;
  for (int k1 = cells.k1_lo; k1 <= cells.k1_hi; ++k1)
    for (int k2 = cells.k2_lo; k2 <= cells.k2_hi; ++k2) {
      double m = 0.0;
      for (int i = 0; i <= spu; ++i)
        for (int j = 0; j <= spu; ++j)
          m = std::max(m, std::abs(f(k1 + double(i) / spu, k2 + double(j) / spu)));
      total += m;
    }
  return total;
}

double modulus_at(const Fn2& f, double delta, double x, double y, ShiftProbe probe) {
  if (delta < 0) throw InputError("modulus of continuity: delta must be >= 0");
  if (delta == 0) return 0.0;
  const double f0 = f(x, y);
  double m = 0.0;
  for (int r = 1; r <= probe.radii; ++r) {
    const double rho = delta * r / probe.radii;
    for (int a = 0; a < probe.directions; ++a) {
      const double th = 2.0 * std::numbers::pi * a / probe.directions;
      m = std::max(m, std::abs(f(x + rho * std::cos(th), y + rho * std::sin(th)) - f0));
    }
  }
  return m;
}

GridFunction modulus_of_continuity(const Fn2& f, double delta, const Grid& g, ShiftProbe probe) {
  if (delta < 0) throw InputError("modulus of continuity: delta must be >= 0");
  GridFunction out(g);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) out.at(i, j) = modulus_at(f, delta, g.x.at(i), g.y.at(j), probe);
  return out;
}

Window generator_cells(const Generator& g, double pad) {
  const int rt = int(std::ceil(g.radius_t() + pad)), rs = int(std::ceil(g.radius_s() + pad));
  return {-rt - 1, rt, -rs - 1, rs};
}

Window dual_cells(const DualGenerator& d, double pad) {
  const int rt = int(std::ceil(d.t().support_radius() + pad));
  const int rs = int(std::ceil(d.s().support_radius() + pad));
  return {-rt - 1, rt, -rs - 1, rs};
}

void write_dual_csv(std::ostream& os, const DualGenerator& d) {
  const CoefSeq c = d.coefficients();
  const Window& w = c.window();
  char buf[64];
  os << "k1,k2,b\n";
  for (int i = w.k1_lo; i <= w.k1_hi; ++i)
    for (int j = w.k2_lo; j <= w.k2_hi; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", c(i, j));
      os << i << ',' << j << ',' << buf << '\n';
    }
}

}  // namespace lpq
