#pragma once

#include "lpqtem/grid.hpp"
#include "lpqtem/mixed_norm.hpp"
#include "lpqtem/tem.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lpq {

struct ExperimentConfig {
  // generator
  int order_t = 2, order_s = 2, ring_size = 64;
  // grid; the time extent is also the encoding horizon
  double x_min = 0.0, x_max = 32.0, y_min = 0.0, y_max = 12.0;
  int samples_per_unit = 32;
  // norm
  double p = 2.0, q = 2.0;
  // devices at y_min + offset + spacing * j
  int device_count = 13;
  double device_spacing = 1.0, device_offset = 0.25, delta_prime = 0.5;
  TemConfig tem;
  // iteration
  int n_max = 40;
  double tol = 1e-8;
  // frame suite
  std::vector<double> frame_deltas{0.25};
  std::vector<int> frame_orders{2, 4, 8};
  int frame_signals = 20;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  Grid grid() const { return Grid::uniform(x_min, x_max, y_min, y_max, samples_per_unit); }
  Horizon horizon() const { return {x_min, x_max, 1.0 / samples_per_unit}; }
  MixedNormParams params() const { return {p, q}; }
  DeviceSet devices() const;

  // Throws ConfigError naming the field and the violated constraint.
  void validate() const;
  bool operator==(const ExperimentConfig&) const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace lpq
