#include "lpqtem/grid.hpp"

#include "lpqtem/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lpq {

Grid Grid::uniform(double x_lo, double x_hi, double y_lo, double y_hi, int spu) {
  if (spu <= 0) throw InputError("samples per unit must be positive");
  Grid g;
  g.x = {x_lo, x_hi, int(std::lround((x_hi - x_lo) * spu))};
  g.y = {y_lo, y_hi, int(std::lround((y_hi - y_lo) * spu))};
  g.validate();
  return g;
}

void Grid::validate() const {
  if (!(x.hi > x.lo) || !(y.hi > y.lo) || x.intervals < 1 || y.intervals < 1)
    throw InputError("grid: bounds must be increasing with at least one interval per axis");
}

bool Grid::operator==(const Grid& o) const {
  return x.lo == o.x.lo && x.hi == o.x.hi && x.intervals == o.x.intervals && y.lo == o.y.lo &&
         y.hi == o.y.hi && y.intervals == o.y.intervals;
}

GridFunction::GridFunction(const Grid& g, double fill) : grid_(g), v_(g.size(), fill) {}

GridFunction::GridFunction(const Grid& g, std::vector<double> values)
    : grid_(g), v_(std::move(values)) {
  if (v_.size() != g.size()) throw InputError("GridFunction: value count does not match grid");
}

void GridFunction::require_finite() const {
  for (double v : v_)
    if (!std::isfinite(v)) throw InputError("GridFunction: non-finite value");
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  if (!(grid_ == o.grid_)) throw InputError("GridFunction: grid mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}
GridFunction& GridFunction::operator-=(const GridFunction& o) {
  if (!(grid_ == o.grid_)) throw InputError("GridFunction: grid mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}
GridFunction& GridFunction::operator*=(double a) {
  for (double& v : v_) v *= a;
  return *this;
}
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator*(double a, GridFunction f) { return f *= a; }

CoefSeq::CoefSeq(const Window& w, double fill) : w_(w), v_(w.size(), fill) {
  if (w.empty()) throw InputError("CoefSeq: empty window");
}

CoefSeq::CoefSeq(const Window& w, std::vector<double> values) : w_(w), v_(std::move(values)) {
  if (w.empty()) throw InputError("CoefSeq: empty window");
  if (v_.size() != w.size()) throw InputError("CoefSeq: value count does not match window");
}

void CoefSeq::require_finite() const {
  for (double v : v_)
    if (!std::isfinite(v)) throw InputError("CoefSeq: non-finite entry");
}

double CoefSeq::max_abs() const {
  double m = 0.0;
  for (double v : v_) m = std::max(m, std::abs(v));
  return m;
}

CoefSeq& CoefSeq::operator+=(const CoefSeq& o) {
  if (!(w_ == o.w_)) throw InputError("CoefSeq: window mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}
CoefSeq& CoefSeq::operator-=(const CoefSeq& o) {
  if (!(w_ == o.w_)) throw InputError("CoefSeq: window mismatch");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}
CoefSeq& CoefSeq::operator*=(double a) {
  for (double& v : v_) v *= a;
  return *this;
}
CoefSeq operator-(CoefSeq a, const CoefSeq& b) { return a -= b; }
CoefSeq operator+(CoefSeq a, const CoefSeq& b) { return a += b; }
CoefSeq operator*(double a, CoefSeq c) { return c *= a; }

}  // namespace lpq
