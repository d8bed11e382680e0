#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lpq {

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int intervals = 1;

  double step() const { return (hi - lo) / intervals; }
  int points() const { return intervals + 1; }
  double at(int i) const { return lo + (hi - lo) * i / intervals; }
};

struct Grid {
  Axis x;
  Axis y;

  static Grid uniform(double x_lo, double x_hi, double y_lo, double y_hi, int samples_per_unit);

  int nx() const { return x.points(); }
  int ny() const { return y.points(); }
  std::size_t size() const { return std::size_t(nx()) * ny(); }
  double hx() const { return x.step(); }
  double hy() const { return y.step(); }
  void validate() const;
  bool operator==(const Grid& o) const;
};

// Row-major samples, index (ix, iy) -> ix * ny + iy.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(const Grid& g, double fill = 0.0);
  GridFunction(const Grid& g, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  double& at(int ix, int iy) { return v_[std::size_t(ix) * grid_.ny() + iy]; }
  double at(int ix, int iy) const { return v_[std::size_t(ix) * grid_.ny() + iy]; }
  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }
  std::span<const double> row(int ix) const {
    return {v_.data() + std::size_t(ix) * grid_.ny(), std::size_t(grid_.ny())};
  }

  void require_finite() const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double a);

 private:
  Grid grid_;
  std::vector<double> v_;
};

GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator*(double a, GridFunction f);

// Integer index window K1 x K2 (inclusive bounds).
struct Window {
  int k1_lo = 0, k1_hi = -1;
  int k2_lo = 0, k2_hi = -1;

  int n1() const { return k1_hi - k1_lo + 1; }
  int n2() const { return k2_hi - k2_lo + 1; }
  std::size_t size() const { return empty() ? 0 : std::size_t(n1()) * n2(); }
  bool empty() const { return n1() <= 0 || n2() <= 0; }
  bool contains(int k1, int k2) const {
    return k1 >= k1_lo && k1 <= k1_hi && k2 >= k2_lo && k2 <= k2_hi;
  }
  bool operator==(const Window&) const = default;
};

class CoefSeq {
 public:
  CoefSeq() = default;
  explicit CoefSeq(const Window& w, double fill = 0.0);
  CoefSeq(const Window& w, std::vector<double> values);

  const Window& window() const { return w_; }
  double& operator()(int k1, int k2) { return v_[idx(k1, k2)]; }
  double operator()(int k1, int k2) const { return v_[idx(k1, k2)]; }
  double get(int k1, int k2) const { return w_.contains(k1, k2) ? v_[idx(k1, k2)] : 0.0; }
  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }

  void require_finite() const;
  double max_abs() const;

  CoefSeq& operator+=(const CoefSeq& o);
  CoefSeq& operator-=(const CoefSeq& o);
  CoefSeq& operator*=(double a);

 private:
  std::size_t idx(int k1, int k2) const {
    return std::size_t(k1 - w_.k1_lo) * w_.n2() + (k2 - w_.k2_lo);
  }
  Window w_;
  std::vector<double> v_;
};

CoefSeq operator-(CoefSeq a, const CoefSeq& b);
CoefSeq operator+(CoefSeq a, const CoefSeq& b);
CoefSeq operator*(double a, CoefSeq c);

}  // namespace lpq
