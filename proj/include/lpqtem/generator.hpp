#pragma once

#include "lpqtem/grid.hpp"

#include <functional>
#include <utility>
#include <iosfwd>
#include <vector>

namespace lpq {

using Fn2 = std::function<double(double, double)>;

class Generator {
 public:
  explicit Generator(int order_t = 2, int order_s = 2);

  // Box functions on both axes; order 1 is below the continuity requirement and
  // is allowed only through this factory (orthonormal reference case).
  static Generator orthonormal_box();

  int order_t() const { return ot_; }
  int order_s() const { return os_; }
  double radius_t() const { return 0.5 * ot_; }
  double radius_s() const { return 0.5 * os_; }

  double t(double x) const;
  double s(double y) const;
  double operator()(double x, double y) const { return t(x) * s(y); }
  double integral_t(double x) const;
  double integral_s(double y) const;

  bool operator==(const Generator&) const = default;

 private:
  Generator(int ot, int os, bool);
  int ot_, os_;
};

// Min and max over [0, pi] of a(0) + 2 sum_j a(j) cos(j xi); throws SingularGeneratorError
// when the minimum is below 1e-8.
std::pair<double, double> gram_symbol_bounds(const std::vector<double>& autocorrelation);

// One-axis dual: beta~ = sum_m b(m) beta(. - m), |m| <= radius.
class SplineDual1D {
 public:
  SplineDual1D(int order, int ring_size);

  int order() const { return order_; }
  int radius() const { return radius_; }
  double b(int m) const { return (m < -radius_ || m > radius_) ? 0.0 : b_[m + radius_]; }
  const std::vector<double>& coefficients() const { return b_; }
  double tail_bound() const { return tail_; }
  double symbol_min() const { return smin_; }
  double symbol_max() const { return smax_; }
  // max_j |sum_m b(m) a(j - m) - delta_j|, exact convolution with the autocorrelation.
  double biorthogonality_residual() const { return resid_; }
  double l1() const;
  double support_radius() const { return radius_ + 0.5 * order_; }

  double operator()(double x) const;
  double integral(double x) const;  // over (-inf, x]

  // Test hook: perturb b(m) after construction.
  void corrupt(int m, double delta);

 private:
  void refresh();

  int order_;
  int radius_ = 0;
  std::vector<double> b_;
  std::vector<double> prefix_;  // prefix_[i] = sum of b_[0..i-1]
  double tail_ = 0.0, smin_ = 0.0, smax_ = 0.0, resid_ = 0.0;
};

class DualGenerator {
 public:
  DualGenerator(const Generator& g, int ring_size = 64);

  const SplineDual1D& t() const { return t_; }
  const SplineDual1D& s() const { return s_; }
  double operator()(double x, double y) const { return t_(x) * s_(y); }
  CoefSeq coefficients() const;
  double tail_bound() const;
  double biorthogonality_residual() const;
  SplineDual1D& mutable_t() { return t_; }

 private:
  SplineDual1D t_, s_;
};

DualGenerator dual_generator(const Generator& g, int ring_size = 64);
// Doubles the ring until the tail bound is met (up to max_ring).
DualGenerator dual_generator_auto(const Generator& g, int ring_size = 64, int max_ring = 4096);

struct GeneratorInfo {
  double m = 0, M = 0;
  double amalgam_norm_phi = 0, amalgam_norm_dual = 0;
};
GeneratorInfo generator_info(const Generator& g, const DualGenerator& d);

// sum over unit cells [k1,k1+1) x [k2,k2+1) in `cells` of the sampled cell sup of |f|.
// Estimate: sup taken over (spu+1)^2 points per cell.
double amalgam_norm(const Fn2& f, const Window& cells, int samples_per_unit = 64);

struct ShiftProbe {
  int directions = 16;
  int radii = 8;
};
double modulus_at(const Fn2& f, double delta, double x, double y, ShiftProbe probe = {});
GridFunction modulus_of_continuity(const Fn2& f, double delta, const Grid& probe_grid,
                                   ShiftProbe probe = {});

// Cells carrying the support of phi and of phi~ (with one cell of slack).
Window generator_cells(const Generator& g, double pad = 0.0);
Window dual_cells(const DualGenerator& d, double pad = 0.0);

void write_dual_csv(std::ostream& os, const DualGenerator& d);

}  // namespace lpq
