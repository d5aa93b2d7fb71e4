#include <benchmark/benchmark.h>

#include "fri2d/estimation.hpp"
#include "fri2d/experiments.hpp"
#include "fri2d/kernels.hpp"
#include "fri2d/signals.hpp"
#include "fri2d/spectral.hpp"

using namespace fri2d;

namespace {

const double kW0 = kPi / 0.99;

void BM_NonsepFrequency(benchmark::State& state) {
  const NonseparableKernel k(SpectralGrid::symmetric(static_cast<int>(state.range(0)), kW0));
  double w = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nonsep_freq(k, w, 0.7 * w));
    w += 1e-3;
  }
}
BENCHMARK(BM_NonsepFrequency)->Arg(4)->Arg(15);

void BM_NonsepSpatial(benchmark::State& state) {
  const NonseparableKernel k(SpectralGrid::symmetric(static_cast<int>(state.range(0)), kW0));
  double x = -0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nonsep_spatial(k, x, 0.3));
    x = x > 0.5 ? -0.5 : x + 1e-4;
  }
}
BENCHMARK(BM_NonsepSpatial)->Arg(4)->Arg(15);

void BM_SmsSpatial(benchmark::State& state) {
  const SeparableSmsKernel k(SpectralGrid::symmetric(4, kW0), static_cast<int>(state.range(0)), 2);
  double x = -0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sms_spatial(k, x, 0.3));
    x = x > 0.5 ? -0.5 : x + 1e-4;
  }
}
BENCHMARK(BM_SmsSpatial)->Arg(1)->Arg(4);

void BM_AcquireDiracs(benchmark::State& state) {
  const KernelSpec k = NonseparableKernel(SpectralGrid::symmetric(4, kW0));
  const auto cfg = covering_window(k, DiracPulse{}, {}, k.grid().critical_rate_x(), k.grid().critical_rate_y());
  const FriSignal f{{{0.7, 0.2, 0.3}, {0.4, 0.6, 0.8}, {0.9, 0.45, 0.1}, {0.3, 0.85, 0.55}}, DiracPulse{}};
  for (auto _ : state) benchmark::DoNotOptimize(acquire(f, k, cfg));
}
BENCHMARK(BM_AcquireDiracs)->Unit(benchmark::kMicrosecond);

void BM_AcquireGaussianBlob(benchmark::State& state) {
  const auto c = default_blob_config();
  const KernelSpec k = make_kernel(c);
  const PulseShape shape = make_shape(c);
  const auto cfg = covering_window(k, shape, c.fov, sampling_rate_x(c), sampling_rate_y(c));
  const FriSignal f{{{1.0, 0.31, 0.62}}, shape};
  for (auto _ : state) benchmark::DoNotOptimize(acquire(f, k, cfg));
}
BENCHMARK(BM_AcquireGaussianBlob)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_Estimate2d(benchmark::State& state) {
  const int half = static_cast<int>(state.range(0));
  const int L = static_cast<int>(state.range(1));
  const auto g = SpectralGrid::symmetric(half, kW0);
  std::vector<Pulse> pulses;
  for (int l = 0; l < L; ++l) pulses.push_back({1.0, 0.1 + 0.2 * l, 0.8 - 0.15 * l});
  const SwceMeasurements p{swce_model(g, pulses), g};
  EstimationOptions opt;
  opt.pairing = state.range(2) == 0 ? PairingMethod::CoupledPencil : PairingMethod::AmplitudeAssignment;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_2d(p, L, opt));
}
BENCHMARK(BM_Estimate2d)->Args({4, 4, 0})->Args({4, 4, 1})->Args({15, 3, 0})->Unit(benchmark::kMicrosecond);

void BM_DiracExperimentTrial(benchmark::State& state) {
  auto c = default_dirac_config();
  c.trials = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_dirac_experiment(c));
}
BENCHMARK(BM_DiracExperimentTrial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
