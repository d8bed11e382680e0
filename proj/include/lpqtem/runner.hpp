#pragma once

#include "lpqtem/config.hpp"
#include "lpqtem/generator.hpp"
#include "lpqtem/kernel.hpp"
#include "lpqtem/tem.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace lpq {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitPrecondition = 3,
  kExitNonConvergence = 4,
};

// Everything derived from a config before any signal is drawn.
struct Setup {
  explicit Setup(const ExperimentConfig& cfg);
  ExperimentConfig cfg;
  Generator g;
  DualGenerator d;
  Grid grid;
  SpanKernel K;
  DeviceSet dev;
};

// The seeded test signal: rendered sup is 0.8 * c_bound.
VSignal experiment_signal(const Setup& s);

// Each writes its files into cfg.output_dir and returns an exit code; errors propagate.
int run_encode(const ExperimentConfig& cfg, std::ostream& log);
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);
int run_frames(const ExperimentConfig& cfg, std::ostream& log);

// Maps exceptions to exit codes and prints them to `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace lpq
