#pragma once

#include "lpqtem/exec.hpp"
#include "lpqtem/kernel.hpp"
#include "lpqtem/kernel_stats.hpp"
#include "lpqtem/tem.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace lpq {

// Sample i of a C-TEM device owns [c_i, c_{i+1}): c_0 is the horizon start, interior
// ends are midpoints of consecutive fires, the last end is the horizon end.
std::vector<double> sample_cells(const DeviceEvents& ev, const Horizon& h);

// Piecewise-constant quasi-interpolant of the recovered samples, rendered on the grid.
GridFunction apply_S(const TemOutput& out, const DeviceSet& dev, const Grid& grid);

// T S in coefficient space: exact cell integrals of the dual generator.
class CrossingOperator {
 public:
  CrossingOperator(const SpanKernel& k, const TemOutput& out, const DeviceSet& dev);
  std::vector<double> sample(const VSignal& g) const;   // g(x_i, y_j), device-major
  CoefSeq apply(const std::vector<double>& samples) const;
  std::vector<double> data() const;                     // recovered values of f
  std::size_t size() const { return offsets_.back(); }

 private:
  const SpanKernel& k_;
  const TemOutput& out_;
  const DeviceSet& dev_;
  std::vector<std::size_t> offsets_;
  std::vector<Eigen::MatrixXd> jt_;  // per device: cells x n1
  Eigen::MatrixXd js_;               // devices x n2
};

// R of the IF machine in coefficient space.
class IntegrateFireOperator {
 public:
  IntegrateFireOperator(const SpanKernel& k, const TemOutput& out, const DeviceSet& dev);
  // int_{x_i}^{x_{i+1}} g(u, y_j) e^{alpha (u - x_{i+1})} du, device-major
  std::vector<double> sample(const VSignal& g) const;
  CoefSeq apply(const std::vector<double>& integrals) const;
  std::vector<double> data() const;
  std::size_t size() const { return offsets_.back(); }

 private:
  const SpanKernel& k_;
  const TemOutput& out_;
  const DeviceSet& dev_;
  std::vector<std::size_t> offsets_;
  std::vector<Eigen::MatrixXd> gt_;  // per device: intervals x n1, weighted generator integrals
  std::vector<Eigen::MatrixXd> dt_;  // per device: intervals x n1, dual at interval midpoints
  Eigen::MatrixXd ds_;               // devices x n2, ||u_j||_1 * dual at y_j
};

VSignal apply_R(const SpanKernel& k, const TemOutput& out, const DeviceSet& dev);

struct IterationOptions {
  int n_max = 40;
  double tol = 1e-8;
  MixedNormParams params{2.0, 2.0};
  Grid grid;
  std::optional<VSignal> truth;  // experiment mode when set, blind mode otherwise
  double predicted_bound = -1.0;  // negative when not computed
  Exec exec = Exec::parallel;
};

struct ReconstructionReport {
  std::vector<double> errors;   // e_0..e_N (blind mode: successive differences)
  std::vector<double> ratios;   // e_{n+1} / e_n
  double reference_norm = 0.0;  // ||f|| (blind mode: ||f_1||)
  double r_hat = 0.0;
  double predicted_bound = -1.0;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  bool blind = false;
  double log_slope = 0.0;  // least-squares fit of log e_n against n
  double log_r2 = 0.0;
  double wall_seconds = 0.0;
};

std::pair<VSignal, ReconstructionReport> ctem_iterate(const TemOutput& out, const SpanKernel& k,
                                                      const DeviceSet& dev,
                                                      const IterationOptions& opt);
std::pair<VSignal, ReconstructionReport> iftem_iterate(const TemOutput& out, const SpanKernel& k,
                                                       const DeviceSet& dev,
                                                       const IterationOptions& opt);

double estimate_r1(const KernelStats& s, double delta, double delta_prime);
double estimate_r2(const KernelStats& s, double delta, double delta_prime, double alpha);

}  // namespace lpq
