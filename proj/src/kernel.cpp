#include "lpqtem/kernel.hpp"

#include "lpqtem/bspline.hpp"
#include "lpqtem/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lpq {

namespace {

// Integer shifts k with beta(x - k) possibly nonzero, intersected with [lo, hi].
inline void support_range(double x, double radius, int lo, int hi, int& a, int& b) {
  a = std::max(lo, int(std::floor(x - radius)));
  b = std::min(hi, int(std::ceil(x + radius)));
}

// Sparse per-point B-spline table: for each sample the first shift and order+1 values.
struct SparseTable {
  int width = 0;
  std::vector<int> first;
  std::vector<double> vals;
};

SparseTable primal_table(int order, const Axis& ax, int klo, int khi) {
  SparseTable t;
  t.width = order + 1;
  const int n = ax.points();
  t.first.resize(n);
  t.vals.assign(std::size_t(n) * t.width, 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = ax.at(i);
    const int a = int(std::floor(x - 0.5 * order));
    t.first[i] = a;
    for (int m = 0; m < t.width; ++m) {
      const int k = a + m;
      if (k >= klo && k <= khi) t.vals[std::size_t(i) * t.width + m] = bspline_eval(order, x - k);
    }
  }
  return t;
}

Eigen::MatrixXd dual_table(const SplineDual1D& d, const Axis& ax, int klo, int khi,
                           const std::vector<double>* w) {
  Eigen::MatrixXd m(ax.points(), khi - klo + 1);
  for (int i = 0; i < ax.points(); ++i)
    for (int k = klo; k <= khi; ++k)
      m(i, k - klo) = d(ax.at(i) - k) * (w ? (*w)[i] : 1.0);
  return m;
}

Eigen::MatrixXd to_matrix(const CoefSeq& c) {
  const Window& w = c.window();
  Eigen::MatrixXd m(w.n1(), w.n2());
  for (int i = 0; i < w.n1(); ++i)
    for (int j = 0; j < w.n2(); ++j) m(i, j) = c.values()[std::size_t(i) * w.n2() + j];
  return m;
}

CoefSeq from_matrix(const Window& w, const Eigen::MatrixXd& m) {
  CoefSeq c(w);
  for (int i = 0; i < w.n1(); ++i)
    for (int j = 0; j < w.n2(); ++j) c.values()[std::size_t(i) * w.n2() + j] = m(i, j);
  return c;
}

}  // namespace

TimeSlice::TimeSlice(int order, int k_lo, std::vector<double> a)
    : order_(order), k_lo_(k_lo), a_(std::move(a)) {}

double TimeSlice::operator()(double x) const {
  int lo, hi;
  support_range(x, 0.5 * order_, k_lo_, k_lo_ + int(a_.size()) - 1, lo, hi);
  double s = 0.0;
  for (int k = lo; k <= hi; ++k) s += a_[k - k_lo_] * bspline_eval(order_, x - k);
  return s;
}

double TimeSlice::integral(double lo, double hi) const {
  double s = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) {
    const double k = k_lo_ + double(i);
    if (a_[i] != 0.0) s += a_[i] * (bspline_integral(order_, hi - k) - bspline_integral(order_, lo - k));
  }
  return s;
}

VSignal::VSignal(const Generator& g, CoefSeq c) : g_(g), c_(std::move(c)) { c_.require_finite(); }

double VSignal::operator()(double x, double y) const {
  const Window& w = c_.window();
  int a1, b1, a2, b2;
  support_range(x, g_.radius_t(), w.k1_lo, w.k1_hi, a1, b1);
  support_range(y, g_.radius_s(), w.k2_lo, w.k2_hi, a2, b2);
  double s = 0.0;
  for (int k1 = a1; k1 <= b1; ++k1) {
    const double bt = g_.t(x - k1);
    if (bt == 0.0) continue;
    for (int k2 = a2; k2 <= b2; ++k2) s += c_(k1, k2) * bt * g_.s(y - k2);
  }
  return s;
}

TimeSlice VSignal::slice(double y) const {
  const Window& w = c_.window();
  std::vector<double> a(w.n1(), 0.0);
  int a2, b2;
  support_range(y, g_.radius_s(), w.k2_lo, w.k2_hi, a2, b2);
  for (int k2 = a2; k2 <= b2; ++k2) {
    const double bs = g_.s(y - k2);
    if (bs == 0.0) continue;
    for (int k1 = w.k1_lo; k1 <= w.k1_hi; ++k1) a[k1 - w.k1_lo] += c_(k1, k2) * bs;
  }
  return TimeSlice(g_.order_t(), w.k1_lo, std::move(a));
}

DualSignal::DualSignal(const DualGenerator& d, CoefSeq e) : d_(d), e_(std::move(e)) {
  e_.require_finite();
}

double DualSignal::operator()(double x, double y) const {
  const Window& w = e_.window();
  int a1, b1, a2, b2;
  support_range(x, d_.t().support_radius(), w.k1_lo, w.k1_hi, a1, b1);
  support_range(y, d_.s().support_radius(), w.k2_lo, w.k2_hi, a2, b2);
  double s = 0.0;
  for (int k1 = a1; k1 <= b1; ++k1) {
    const double bt = d_.t()(x - k1);
    if (bt == 0.0) continue;
    for (int k2 = a2; k2 <= b2; ++k2) s += e_(k1, k2) * bt * d_.s()(y - k2);
  }
  return s;
}

GridFunction render(const VSignal& f, const Grid& g, Exec exec) {
  const Window& w = f.coefficients().window();
  const int ot = f.generator().order_t(), os = f.generator().order_s();
  const SparseTable tx = primal_table(ot, g.x, w.k1_lo, w.k1_hi);
  const SparseTable ty = primal_table(os, g.y, w.k2_lo, w.k2_hi);
  GridFunction out(g);
  const int nx = g.nx(), ny = g.ny(), n2 = w.n2();
  const CoefSeq& c = f.coefficients();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < nx; ++i) {
    std::vector<double> row(n2, 0.0);
    for (int m = 0; m < tx.width; ++m) {
      const double v = tx.vals[std::size_t(i) * tx.width + m];
      if (v == 0.0) continue;
      const int k1 = tx.first[i] + m;
      for (int k2 = w.k2_lo; k2 <= w.k2_hi; ++k2) row[k2 - w.k2_lo] += v * c(k1, k2);
    }
    for (int j = 0; j < ny; ++j) {
      double s = 0.0;
      for (int m = 0; m < ty.width; ++m) {
        const double v = ty.vals[std::size_t(j) * ty.width + m];
        if (v != 0.0) s += v * row[ty.first[j] + m - w.k2_lo];
      }
      out.at(i, j) = s;
    }
  }
  return out;
}

GridFunction render(const DualSignal& f, const Grid& g, Exec exec) {
  const Window& w = f.coefficients().window();
  // Dual functions have wide support, so dense tables are used.
  const Eigen::MatrixXd e = to_matrix(f.coefficients());
  const Eigen::MatrixXd tx = dual_table(f.dual().t(), g.x, w.k1_lo, w.k1_hi, nullptr);
  const Eigen::MatrixXd ty = dual_table(f.dual().s(), g.y, w.k2_lo, w.k2_hi, nullptr);
  const Eigen::MatrixXd rows = tx * e;  // nx x n2
  GridFunction out(g);
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) out.at(i, j) = ty.row(j).dot(rows.row(i));
  return out;
}

SpanKernel::SpanKernel(const Generator& g, const DualGenerator& d, const Window& w,
                       std::vector<KronTerm> terms)
    : g_(g), d_(d), w_(w), terms_(std::move(terms)) {
  if (w.empty()) throw InputError("SpanKernel: empty window");
  for (auto& t : terms_) {
    if (t.identity) {
      t.at = Eigen::MatrixXd::Identity(w.n1(), w.n1());
      t.as = Eigen::MatrixXd::Identity(w.n2(), w.n2());
    }
    if (t.at.rows() != w.n1() || t.at.cols() != w.n1() || t.as.rows() != w.n2() ||
        t.as.cols() != w.n2())
      throw InputError("SpanKernel: term dimensions do not match the window");
  }
}

double SpanKernel::factor_t(const KronTerm& term, double x, double s) const {
  int a, b;
  support_range(x, g_.radius_t(), w_.k1_lo, w_.k1_hi, a, b);
  double out = 0.0;
  if (term.identity) {
    for (int k = a; k <= b; ++k) {
      const double v = g_.t(x - k);
      if (v != 0.0) out += v * d_.t()(s - k);
    }
    return out;
  }
  int c, e;
  support_range(s, d_.t().support_radius(), w_.k1_lo, w_.k1_hi, c, e);
  for (int k = a; k <= b; ++k) {
    const double v = g_.t(x - k);
    if (v == 0.0) continue;
    double u = 0.0;
    for (int kk = c; kk <= e; ++kk) u += term.at(k - w_.k1_lo, kk - w_.k1_lo) * d_.t()(s - kk);
    out += v * u;
  }
  return out;
}

double SpanKernel::factor_s(const KronTerm& term, double y, double t) const {
  int a, b;
  support_range(y, g_.radius_s(), w_.k2_lo, w_.k2_hi, a, b);
  double out = 0.0;
  if (term.identity) {
    for (int k = a; k <= b; ++k) {
      const double v = g_.s(y - k);
      if (v != 0.0) out += v * d_.s()(t - k);
    }
    return out;
  }
  int c, e;
  support_range(t, d_.s().support_radius(), w_.k2_lo, w_.k2_hi, c, e);
  for (int k = a; k <= b; ++k) {
    const double v = g_.s(y - k);
    if (v == 0.0) continue;
    double u = 0.0;
    for (int kk = c; kk <= e; ++kk) u += term.as(k - w_.k2_lo, kk - w_.k2_lo) * d_.s()(t - kk);
    out += v * u;
  }
  return out;
}

double SpanKernel::operator()(double x, double y, double s, double t) const {
  double out = 0.0;
  for (const auto& term : terms_) {
    if (term.weight == 0.0) continue;
    const double ft = factor_t(term, x, s);
    if (ft == 0.0) continue;
    out += term.weight * ft * factor_s(term, y, t);
  }
  return out;
}

double SpanKernel::lattice_t(double x, double s) const {
  const int a = int(std::floor(x - g_.radius_t())), b = int(std::ceil(x + g_.radius_t()));
  double out = 0.0;
  for (int k = a; k <= b; ++k) {
    const double v = g_.t(x - k);
    if (v != 0.0) out += v * d_.t()(s - k);
  }
  return out;
}

double SpanKernel::lattice_s(double y, double t) const {
  const int a = int(std::floor(y - g_.radius_s())), b = int(std::ceil(y + g_.radius_s()));
  double out = 0.0;
  for (int k = a; k <= b; ++k) {
    const double v = g_.s(y - k);
    if (v != 0.0) out += v * d_.s()(t - k);
  }
  return out;
}

CoefSeq SpanKernel::apply(const CoefSeq& c) const {
  if (!(c.window() == w_)) throw InputError("SpanKernel::apply: window mismatch");
  const Eigen::MatrixXd cm = to_matrix(c);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(w_.n1(), w_.n2());
  for (const auto& t : terms_) {
    if (t.identity)
      out += t.weight * cm;
    else
      out += t.weight * (t.at * cm * t.as.transpose());
  }
  return from_matrix(w_, out);
}

VSignal SpanKernel::slice_st(double s, double t) const {
  Eigen::VectorXd wt(w_.n1()), ws(w_.n2());
  for (int k = w_.k1_lo; k <= w_.k1_hi; ++k) wt(k - w_.k1_lo) = d_.t()(s - k);
  for (int k = w_.k2_lo; k <= w_.k2_hi; ++k) ws(k - w_.k2_lo) = d_.s()(t - k);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(w_.n1(), w_.n2());
  for (const auto& term : terms_) e += term.weight * (term.at * wt) * (term.as * ws).transpose();
  return VSignal(g_, from_matrix(w_, e));
}

DualSignal SpanKernel::slice_xy(double x, double y) const {
  Eigen::VectorXd vt(w_.n1()), vs(w_.n2());
  for (int k = w_.k1_lo; k <= w_.k1_hi; ++k) vt(k - w_.k1_lo) = g_.t(x - k);
  for (int k = w_.k2_lo; k <= w_.k2_hi; ++k) vs(k - w_.k2_lo) = g_.s(y - k);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(w_.n1(), w_.n2());
  for (const auto& term : terms_)
    e += term.weight * (term.at.transpose() * vt) * (term.as.transpose() * vs).transpose();
  return DualSignal(d_, from_matrix(w_, e));
}

SpanKernel SpanKernel::scaled(double a) const {
  auto terms = terms_;
  for (auto& t : terms) t.weight *= a;
  return SpanKernel(g_, d_, w_, std::move(terms));
}

Window default_coefficient_window(const Generator& g, const Grid& grid) {
  const int mt = int(std::ceil(g.radius_t())) + 2, ms = int(std::ceil(g.radius_s())) + 2;
  Window w{int(std::ceil(grid.x.lo)) + mt, int(std::floor(grid.x.hi)) - mt,
           int(std::ceil(grid.y.lo)) + ms, int(std::floor(grid.y.hi)) - ms};
  if (w.empty()) throw PreconditionError("grid too small for a coefficient window with margin");
  return w;
}

SpanKernel build_shift_invariant_kernel(const Generator& g, const DualGenerator& d,
                                        const Window& w) {
  if (d.tail_bound() > 1e-10) throw WindowGrowthError("dual tail bound above 1e-10");
  if (d.biorthogonality_residual() > 1e-8)
    throw PreconditionError("dual biorthogonality residual above 1e-8");
  KronTerm id;
  id.identity = true;
  return SpanKernel(g, d, w, {id});
}

SpanKernel compose(const SpanKernel& a, const SpanKernel& b) {
  if (!(a.window() == b.window()) || !(a.generator() == b.generator()))
    throw InputError("compose: kernels live on different spans");
  std::vector<KronTerm> terms;
  for (const auto& x : a.terms())
    for (const auto& y : b.terms()) {
      KronTerm t;
      t.weight = x.weight * y.weight;
      t.identity = x.identity && y.identity;
      if (!t.identity) {
        t.at = x.at * y.at;
        t.as = x.as * y.as;
      }
      terms.push_back(std::move(t));
    }
  return SpanKernel(a.generator(), a.dual(), a.window(), std::move(terms));
}

SpanKernel difference(const SpanKernel& a, const SpanKernel& b) {
  if (!(a.window() == b.window()) || !(a.generator() == b.generator()))
    throw InputError("difference: kernels live on different spans");
  auto terms = a.terms();
  for (auto t : b.terms()) {
    t.weight = -t.weight;
    terms.push_back(std::move(t));
  }
  return SpanKernel(a.generator(), a.dual(), a.window(), std::move(terms));
}

SpanKernel zero_kernel_like(const SpanKernel& k) {
  KronTerm z;
  z.identity = true;
  z.weight = 0.0;
  return SpanKernel(k.generator(), k.dual(), k.window(), {z});
}

Projector::Projector(const SpanKernel& k, const Grid& grid) : k_(k), grid_(grid) {
  const Window& w = k.window();
  const Generator& g = k.generator();
  constexpr double eps = 1e-12;
  if (w.k1_lo - g.radius_t() < grid.x.lo - eps || w.k1_hi + g.radius_t() > grid.x.hi + eps ||
      w.k2_lo - g.radius_s() < grid.y.lo - eps || w.k2_hi + g.radius_s() > grid.y.hi + eps)
    throw ResolutionError("grid does not cover the supports of the window's generators");
  const auto wx = quadrature_weights(grid.x), wy = quadrature_weights(grid.y);
  dt_ = dual_table(k.dual().t(), grid.x, w.k1_lo, w.k1_hi, &wx);
  ds_ = dual_table(k.dual().s(), grid.y, w.k2_lo, w.k2_hi, &wy);

  auto primal = [](int order, const Axis& ax, int lo, int hi) {
    Eigen::MatrixXd m(ax.points(), hi - lo + 1);
    for (int i = 0; i < ax.points(); ++i)
      for (int kk = lo; kk <= hi; ++kk) m(i, kk - lo) = bspline_eval(order, ax.at(i) - kk);
    return m;
  };
  const Eigen::MatrixXd gt = primal(g.order_t(), grid.x, w.k1_lo, w.k1_hi).transpose() * dt_;
  const Eigen::MatrixXd gs = primal(g.order_s(), grid.y, w.k2_lo, w.k2_hi).transpose() * ds_;
  gram_residual_ = std::max((gt - Eigen::MatrixXd::Identity(w.n1(), w.n1())).cwiseAbs().maxCoeff(),
                            (gs - Eigen::MatrixXd::Identity(w.n2(), w.n2())).cwiseAbs().maxCoeff());
  if (gram_residual_ > 1e-8)
    throw ResolutionError("quadrature self-check failed: Gram residual " +
                          std::to_string(gram_residual_));
}

CoefSeq Projector::analysis(const GridFunction& f, Exec exec) const {
  if (!(f.grid() == grid_)) throw InputError("Projector: grid mismatch");
  f.require_finite();
  const Window& w = k_.window();
  const int nx = grid_.nx(), ny = grid_.ny(), n1 = w.n1(), n2 = w.n2();
  Eigen::MatrixXd tmp(nx, n2);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < nx; ++i) {
    const auto row = f.row(i);
    for (int b = 0; b < n2; ++b) {
      double s = 0.0;
      for (int j = 0; j < ny; ++j) s += row[j] * ds_(j, b);
      tmp(i, b) = s;
    }
  }
  CoefSeq c(w);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b) {
      double s = 0.0;
      for (int i = 0; i < nx; ++i) s += dt_(i, a) * tmp(i, b);
      c.values()[std::size_t(a) * n2 + b] = s;
    }
  return c;
}

VSignal Projector::apply(const GridFunction& f, Exec exec) const {
  CoefSeq c = analysis(f, exec);
  if (!k_.is_identity()) c = k_.apply(c);
  return VSignal(k_.generator(), std::move(c));
}

VSignal apply_T(const SpanKernel& k, const GridFunction& f, Exec exec) {
  return Projector(k, f.grid()).apply(f, exec);
}

double reproducing_bound(const SpanKernel& k, double x, double y, const MixedNormParams& pq,
                         const Grid& grid) {
  return mixed_function_norm(render(k.slice_xy(x, y), grid), pq.conjugate());
}

AnalysisBound analysis_bound_check(const GridFunction& f, const DualGenerator& d,
                                   const MixedNormParams& pq, double dual_amalgam_norm) {
  f.require_finite();
  const Grid& g = f.grid();
  const Window w{int(std::floor(g.x.lo - d.t().support_radius())),
                 int(std::ceil(g.x.hi + d.t().support_radius())),
                 int(std::floor(g.y.lo - d.s().support_radius())),
                 int(std::ceil(g.y.hi + d.s().support_radius()))};
  const auto wx = quadrature_weights(g.x), wy = quadrature_weights(g.y);
  const Eigen::MatrixXd dt = dual_table(d.t(), g.x, w.k1_lo, w.k1_hi, &wx);
  const Eigen::MatrixXd ds = dual_table(d.s(), g.y, w.k2_lo, w.k2_hi, &wy);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> fm(
      f.values().data(), g.nx(), g.ny());
  const Eigen::MatrixXd c = dt.transpose() * (fm * ds);
  return {mixed_sequence_norm(from_matrix(w, c), pq), mixed_function_norm(f, pq) * dual_amalgam_norm};
}

double reproducing_identity_residual(const Kernel& k, double x, double y, double s, double t,
                                     const Grid& grid) {
  GridFunction a(grid), b(grid);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < grid.nx(); ++i)
    for (int j = 0; j < grid.ny(); ++j) {
      const double u = grid.x.at(i), v = grid.y.at(j);
      a.at(i, j) = k(x, y, u, v);
      b.at(i, j) = k(u, v, s, t);
    }
  return std::abs(duality_pairing(a, b) - k(x, y, s, t));
}

}  // namespace lpq
