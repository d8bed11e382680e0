#pragma once

#include "lpqtem/exec.hpp"
#include "lpqtem/generator.hpp"
#include "lpqtem/grid.hpp"
#include "lpqtem/mixed_norm.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace lpq {

// f restricted to a fixed y: sum_k a(k) beta_t(x - k).
class TimeSlice {
 public:
  TimeSlice(int order, int k_lo, std::vector<double> a);
  double operator()(double x) const;
  double integral(double lo, double hi) const;
  int order() const { return order_; }
  int k_lo() const { return k_lo_; }
  const std::vector<double>& coefficients() const { return a_; }

 private:
  int order_, k_lo_;
  std::vector<double> a_;
};

// f = sum_k c(k) phi(. - k) over the coefficient window.
class VSignal {
 public:
  VSignal(const Generator& g, CoefSeq c);
  const Generator& generator() const { return g_; }
  const CoefSeq& coefficients() const { return c_; }
  CoefSeq& coefficients() { return c_; }
  double operator()(double x, double y) const;
  TimeSlice slice(double y) const;

 private:
  Generator g_;
  CoefSeq c_;
};

// Member of the dual span: sum_k e(k) phi~(. - k).
class DualSignal {
 public:
  DualSignal(const DualGenerator& d, CoefSeq e);
  const CoefSeq& coefficients() const { return e_; }
  const DualGenerator& dual() const { return d_; }
  double operator()(double x, double y) const;

 private:
  DualGenerator d_;
  CoefSeq e_;
};

GridFunction render(const VSignal& f, const Grid& g, Exec exec = Exec::parallel);
GridFunction render(const DualSignal& f, const Grid& g, Exec exec = Exec::parallel);

class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual double operator()(double x, double y, double s, double t) const = 0;
};

class FunctionKernel : public Kernel {
 public:
  using Fn4 = std::function<double(double, double, double, double)>;
  explicit FunctionKernel(Fn4 f) : f_(std::move(f)) {}
  double operator()(double x, double y, double s, double t) const override { return f_(x, y, s, t); }

 private:
  Fn4 f_;
};

// weight * (At kron As); At indexes the time window, As the space window.
struct KronTerm {
  double weight = 1.0;
  Eigen::MatrixXd at, as;
  bool identity = false;
};

// K(x,y;s,t) = sum_{k,k' in W} phi_k(x,y) A[k,k'] phi~_k'(s,t), A a sum of Kronecker terms.
// The single identity term is the windowed K1.
class SpanKernel : public Kernel {
 public:
  SpanKernel(const Generator& g, const DualGenerator& d, const Window& w,
             std::vector<KronTerm> terms);

  const Generator& generator() const { return g_; }
  const DualGenerator& dual() const { return d_; }
  const Window& window() const { return w_; }
  const std::vector<KronTerm>& terms() const { return terms_; }
  bool is_identity() const { return terms_.size() == 1 && terms_[0].identity && terms_[0].weight == 1.0; }

  double operator()(double x, double y, double s, double t) const override;
  double factor_t(const KronTerm& term, double x, double s) const;
  double factor_s(const KronTerm& term, double y, double t) const;

  // Unwindowed K1 factors (sum over all integer shifts).
  double lattice_t(double x, double s) const;
  double lattice_s(double y, double t) const;
  double lattice(double x, double y, double s, double t) const {
    return lattice_t(x, s) * lattice_s(y, t);
  }

  // Coefficient map c -> sum_r w_r At C As^T.
  CoefSeq apply(const CoefSeq& c) const;

  VSignal slice_st(double s, double t) const;      // K(., .; s, t)
  DualSignal slice_xy(double x, double y) const;   // K(x, y; ., .)

  SpanKernel scaled(double a) const;

 private:
  Generator g_;
  DualGenerator d_;
  Window w_;
  std::vector<KronTerm> terms_;
};

// Coefficient window: grid interior with margin ceil(support radius) + 2.
Window default_coefficient_window(const Generator& g, const Grid& grid);

SpanKernel build_shift_invariant_kernel(const Generator& g, const DualGenerator& d,
                                        const Window& w);
SpanKernel compose(const SpanKernel& a, const SpanKernel& b);
SpanKernel difference(const SpanKernel& a, const SpanKernel& b);
SpanKernel zero_kernel_like(const SpanKernel& k);

// The projector T for a span kernel on a grid. Analysis coefficients are
// separable quadratures c = Dt^T F Ds, followed by the kernel's coefficient map.
class Projector {
 public:
  Projector(const SpanKernel& k, const Grid& grid);
  VSignal apply(const GridFunction& f, Exec exec = Exec::parallel) const;
  CoefSeq analysis(const GridFunction& f, Exec exec = Exec::parallel) const;
  double gram_residual() const { return gram_residual_; }

 private:
  const SpanKernel& k_;
  Grid grid_;
  Eigen::MatrixXd dt_, ds_;  // weighted dual samples, nx x n1 and ny x n2
  double gram_residual_ = 0.0;
};

VSignal apply_T(const SpanKernel& k, const GridFunction& f, Exec exec = Exec::parallel);

// ||K(x,y;.,.)||_{L^{p',q'}} by grid quadrature.
double reproducing_bound(const SpanKernel& k, double x, double y, const MixedNormParams& pq,
                         const Grid& grid);

struct AnalysisBound {
  double coef_norm;
  double bound;
};
AnalysisBound analysis_bound_check(const GridFunction& f, const DualGenerator& d,
                                   const MixedNormParams& pq, double dual_amalgam_norm);

// | int K(x,y;u,v) K(u,v;s,t) du dv - K(x,y;s,t) | by literal grid quadrature.
double reproducing_identity_residual(const Kernel& k, double x, double y, double s, double t,
                                     const Grid& grid);

}  // namespace lpq
