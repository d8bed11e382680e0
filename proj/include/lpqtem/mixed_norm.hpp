#pragma once

#include "lpqtem/exec.hpp"
#include "lpqtem/grid.hpp"

#include <limits>
#include <span>
#include <vector>

namespace lpq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class MixedNormParams {
 public:
  MixedNormParams(double p = 2.0, double q = 2.0);

  double p() const { return p_; }
  double q() const { return q_; }
  double p_conj() const { return pc_; }
  double q_conj() const { return qc_; }
  MixedNormParams conjugate() const { return {pc_, qc_}; }

  static double conjugate_of(double r);

 private:
  double p_, q_, pc_, qc_;
};

// Composite Simpson weights for an axis; trapezoid when the interval count is odd.
std::vector<double> quadrature_weights(const Axis& a);

// ||v||_r under weights w (w ignored for r = inf). Scales by the max first.
double weighted_lr(std::span<const double> v, std::span<const double> w, double r);

double mixed_function_norm(const GridFunction& f, const MixedNormParams& pq,
                           Exec exec = Exec::parallel);
double mixed_sequence_norm(const CoefSeq& c, const MixedNormParams& pq);
double duality_pairing(const GridFunction& f, const GridFunction& g, Exec exec = Exec::parallel);

// Plain integral of f over the grid with the same weights.
double integrate(const GridFunction& f);

}  // namespace lpq
