#pragma once

#include "lpqtem/exec.hpp"
#include "lpqtem/kernel.hpp"

#include <functional>
#include <map>
#include <mutex>

namespace lpq {

// Sampling used by every W-norm estimate: sups are grid maxima at
// samples_per_unit, integrals are composite quadratures on the same grid, and
// the integration variable is truncated at `reach` units from the sup variable.
struct WResolution {
  int samples_per_unit = 8;
  double reach = 4.0;
  int allocation_levels = 9;   // radius splits per disk in the modulus estimator
  int interior_samples = 3;    // extra candidates per box edge beyond knots
};

// Domain of one W0 evaluation. Orientation A takes sup over the first variable
// on a_sup and integrates the second over a_int; orientation B takes sup over
// the second variable on b_sup and integrates the first over b_int.
struct PairDomain {
  Axis a_sup, a_int;
  Axis b_int, b_sup;
  static PairDomain periodic(int samples_per_unit, double reach);
  static PairDomain box(const Axis& first, const Axis& second);
};

using Fn2 = std::function<double(double, double)>;

// W0 norm of a two-variable function on a pair domain.
double w0_norm(const Fn2& f, const PairDomain& dom);

// Nested W norm of a generic kernel, outer W0 over (x,s), inner over (y,t).
// Brute force: one kernel evaluation per point of the 4-D product.
double nested_W_norm(const Kernel& k, const PairDomain& outer, const PairDomain& inner,
                     Exec exec = Exec::parallel);

// Nested W norm of a span kernel over its window, using per-term separable tables.
double kron_W_norm(const SpanKernel& k, const WResolution& res, Exec exec = Exec::parallel);

// Unwindowed K1: exact factorization ||Kt||_W0 * ||Ks||_W0 over one period.
double lattice_W_norm(const SpanKernel& k, const WResolution& res);

// ||omega_delta(K1)||_W for the unwindowed K1, shifts over two disks of radius delta.
// Extremes of each tensor factor over per-axis boxes (a discrete family of
// radius splits inscribed in the disks) bound the increment by box corners.
double lattice_omega_W_norm(const SpanKernel& k, double delta, const WResolution& res,
                            Exec exec = Exec::parallel);

// Reference route: explicit shift probes on both disks, no box extremes.
double lattice_omega_W_norm_probe(const SpanKernel& k, double delta, const WResolution& res,
                                  ShiftProbe probe = {}, Exec exec = Exec::parallel);

// Cached statistics of the unwindowed K1 behind a windowed span kernel.
class KernelStats {
 public:
  KernelStats(const SpanKernel& k, WResolution res = {});

  double W_norm() const { return w_norm_; }
  double omega_W_norm(double delta) const;
  const WResolution& resolution() const { return res_; }
  const SpanKernel& kernel() const { return k_; }

 private:
  const SpanKernel& k_;
  WResolution res_;
  double w_norm_;
  mutable std::mutex mu_;
  mutable std::map<double, double> omega_;
};

}  // namespace lpq
