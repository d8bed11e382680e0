#pragma once

#include "lpqtem/exec.hpp"
#include "lpqtem/kernel.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lpq {

// Devices on the space axis. Balls are closed for coverage and the partition of
// unity; the overlap count B uses open balls.
class DeviceSet {
 public:
  DeviceSet(std::vector<double> positions, double delta_prime, double window_lo, double window_hi);
  static DeviceSet regular(int count, double spacing, double offset, double delta_prime,
                           double window_lo, double window_hi);

  const std::vector<double>& positions() const { return y_; }
  std::size_t size() const { return y_.size(); }
  double delta_prime() const { return dp_; }
  int A_gamma() const { return a_; }
  int B_gamma() const { return b_; }
  double window_lo() const { return lo_; }
  double window_hi() const { return hi_; }

  // Nonzero weights u_j(y); throws GapError when no ball covers y.
  std::vector<std::pair<int, double>> partition_of_unity(double y) const;
  // Integral of u_j times a function given by its antiderivative, over [lo, hi] clipped.
  double pou_integral(int j, const std::function<double(double)>& antiderivative, double lo,
                      double hi) const;
  double pou_l1(int j) const;  // over the window

 private:
  // Breakpoints where the cover count changes, inside [lo, hi].
  std::vector<double> pieces(int j, double lo, double hi) const;
  int cover_count(double y) const;

  std::vector<double> y_;
  double dp_, lo_, hi_;
  int a_ = 0, b_ = 0;
};

enum class TemMode { crossing, integrate_and_fire };
std::string to_string(TemMode m);
TemMode tem_mode_from_string(const std::string& s);

struct TemConfig {
  TemMode mode = TemMode::crossing;
  double c_bound = 1.0;
  double b_level = 1.5;
  double delta = 0.25;
  double alpha = 0.0;
  std::optional<double> theta_override;

  void validate() const;
  double lambda_slope() const { return 2.0 * b_level / delta; }
  double kappa(double dt) const;
  double theta() const;
};

struct Horizon {
  double lo = 0.0, hi = 32.0;
  double step = 1.0 / 32;
};

struct DeviceEvents {
  std::vector<double> times;   // fires, seed excluded
  std::vector<double> values;  // C-TEM sample values or IF-TEM interval integrals
  bool tangency = false;
};

struct TemOutput {
  TemConfig cfg;
  Horizon horizon;
  std::vector<DeviceEvents> devices;
};

using Fn1 = std::function<double(double)>;

DeviceEvents ctem_encode(const Fn1& f, const TemConfig& cfg, const Horizon& h);
DeviceEvents iftem_encode(const Fn1& f, const TemConfig& cfg, const Horizon& h);
// One IF-TEM step from t_prev; returns the next fire time.
double iftem_next_fire(const Fn1& f, const TemConfig& cfg, double t_prev, const Horizon& h);

std::vector<double> ctem_decode(const std::vector<double>& times, double seed, const TemConfig& cfg);
std::vector<double> iftem_decode(const std::vector<double>& times, double seed, const TemConfig& cfg);

// Encodes every device slice of f; sup|f| <= c_bound is checked on the scan grid.
TemOutput encode_signal(const VSignal& f, const DeviceSet& dev, const TemConfig& cfg,
                        const Horizon& h, Exec exec = Exec::parallel);

struct DensityReport {
  double max_gap = 0.0;
  std::size_t count = 0;
  bool ok = false;
};
DensityReport density_report(const TemOutput& out, double delta);

}  // namespace lpq
