// Serial loops vs OpenMP kernels vs the pointwise reference routes, default grid.
#include "lpqtem/config.hpp"
#include "lpqtem/kernel_stats.hpp"
#include "lpqtem/reference.hpp"
#include "lpqtem/runner.hpp"
#include "lpqtem/signals.hpp"
#include "lpqtem/tem.hpp"

#include <benchmark/benchmark.h>

using namespace lpq;

namespace {

const Setup& setup() {
  static const Setup s{ExperimentConfig{}};
  return s;
}

const VSignal& signal() {
  static const VSignal f = experiment_signal(setup());
  return f;
}

const GridFunction& noise() {
  static const GridFunction g = [] {
    Rng rng(7);
    return random_grid_function(setup().grid, rng);
  }();
  return g;
}

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void BM_render(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(render(signal(), setup().grid, mode(st)));
}

void BM_render_reference(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(reference::render_pointwise(signal(), setup().grid));
}

void BM_mixed_norm(benchmark::State& st) {
  const MixedNormParams pq(3, 1.5);
  for (auto _ : st) benchmark::DoNotOptimize(mixed_function_norm(noise(), pq, mode(st)));
}

void BM_mixed_norm_reference(benchmark::State& st) {
  const MixedNormParams pq(3, 1.5);
  for (auto _ : st) benchmark::DoNotOptimize(reference::mixed_norm_direct(noise(), pq));
}

void BM_analysis(benchmark::State& st) {
  const Projector T(setup().K, setup().grid);
  for (auto _ : st) benchmark::DoNotOptimize(T.analysis(noise(), mode(st)));
}

void BM_analysis_reference(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(reference::analysis_pointwise(setup().K, noise()));
}

void BM_encode(benchmark::State& st) {
  const Setup& s = setup();
  for (auto _ : st)
    benchmark::DoNotOptimize(encode_signal(signal(), s.dev, s.cfg.tem, s.cfg.horizon(), mode(st)));
}

void BM_kron_W(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kron_W_norm(setup().K, {4, 4.0, 9, 3}, mode(st)));
}

void BM_omega_W(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(lattice_omega_W_norm(setup().K, 0.25, {4, 4.0, 5, 3}, mode(st)));
}

}  // namespace

BENCHMARK(BM_render)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_render_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mixed_norm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mixed_norm_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_analysis)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_analysis_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_encode)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kron_W)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_omega_W)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
