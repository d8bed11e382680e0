#pragma once

#include "lpqtem/exec.hpp"
#include "lpqtem/kernel.hpp"
#include "lpqtem/kernel_stats.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace lpq {

// Cell-integral matrices of a span on the delta lattice of one axis.
// Cell i is [i delta - delta/2, i delta + delta/2], i in [i_lo, i_hi]; rows index the
// coefficient window, P holds generator integrals and Pd dual integrals.
struct LatticeAxis {
  double delta = 0.0;
  int i_lo = 0, i_hi = -1;
  Eigen::MatrixXd P, Pd;
  int size() const { return i_hi - i_lo + 1; }
  double center(int i) const { return i * delta; }
};

LatticeAxis lattice_axis_t(const SpanKernel& k, double delta);
LatticeAxis lattice_axis_s(const SpanKernel& k, double delta);

// Averaged kernel: coefficient map A (Mt kron Ms) A with Mt = Pd P^T / delta.
SpanKernel build_Kdelta(const SpanKernel& k, double delta);

// T + sum_{n=1}^N (T - T_delta)^n. Throws ContractionError when r0 >= 1.
SpanKernel neumann_plus(const SpanKernel& k, const SpanKernel& kdelta, int N, double r0);

// Measured contraction constant ||K - K_delta||_W.
double measured_r0(const SpanKernel& k, const SpanKernel& kdelta, const WResolution& res,
                   Exec exec = Exec::parallel);

// Both expressions under the max in the contraction constant, from lattice statistics.
struct R0Bound {
  double product_branch = 0.0;  // ||K|| w (1 + (||K|| + w) / (1 - ||K|| w))
  double omega_branch = 0.0;    // w
  double omega = 0.0;           // ||omega_{sqrt2 delta}(K)||_W
  double value() const { return std::max(product_branch, omega_branch); }
};
R0Bound r0_bound(const KernelStats& stats, double delta);

struct FrameOptions {
  double delta = 0.25;
  int order = 8;
  MixedNormParams params{2.0, 2.0};
  WResolution res{4, 4.0, 9, 3};
  std::optional<double> r0;  // skips the measurement when given
};

class FrameFamily {
 public:
  FrameFamily(const SpanKernel& k, const FrameOptions& opt, Exec exec = Exec::parallel);

  double delta() const { return opt_.delta; }
  int order() const { return opt_.order; }
  double r0() const { return r0_; }
  const MixedNormParams& params() const { return opt_.params; }
  const LatticeAxis& axis_t() const { return lt_; }
  const LatticeAxis& axis_s() const { return ls_; }
  const SpanKernel& kernel() const { return k_; }
  const SpanKernel& kdelta() const { return kd_; }
  const SpanKernel& kplus() const { return kp_; }

  // <f, dual atom> for every lattice point, rows time cells, columns space cells.
  Eigen::MatrixXd analysis(const VSignal& f) const;
  VSignal synthesis(const Eigen::MatrixXd& a) const;
  VSignal atom(int i, int j) const;
  DualSignal dual_atom(int i, int j) const;

  double dual_atom_bound(const KernelStats& stats) const;

 private:
  const SpanKernel& k_;
  FrameOptions opt_;
  LatticeAxis lt_, ls_;
  SpanKernel kd_, kp_;
  double r0_ = 0.0;
  double analysis_scale_, atom_scale_;
};

// Sequence norm of lattice coefficients (rows time, columns space).
double lattice_sequence_norm(const Eigen::MatrixXd& a, const MixedNormParams& pq);

struct FrameBoundsResult {
  bool zero_signal = false;
  double ratio = 0.0;
  double lower = 0.0, upper = 0.0;  // band [1 - w - slack, 1 + w + slack]
  bool inside = false;
};
FrameBoundsResult frame_bounds_check(const VSignal& f, const FrameFamily& ff, const Grid& grid,
                                     double omega, double slack = 0.05,
                                     Exec exec = Exec::parallel);

VSignal dual_pair_reconstruct(const VSignal& f, const FrameFamily& ff);

// Largest number of lattice points in any open ball of radius r (centers probed on the lattice).
int lattice_overlap_count(const FrameFamily& ff, double r);

}  // namespace lpq
