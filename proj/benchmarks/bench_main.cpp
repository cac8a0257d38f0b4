#include <benchmark/benchmark.h>

#include "qit/biphoton.hpp"
#include "qit/counting.hpp"
#include "qit/paraxial.hpp"
#include "qit/propagation.hpp"
#include "qit/simulation.hpp"

using namespace qit;

namespace {

const WaveContext kPump = WaveContext::from_wavelength(425e-9);

void BM_Propagate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double pitch = 20.48e-3 / static_cast<double>(n);
  const auto f = apply_mask(gaussian_beam(1e-3, n, pitch), wire_mask(0.2e-3, n, pitch));
  for (auto _ : state) benchmark::DoNotOptimize(propagate(f, kPump, 0.5));
}
BENCHMARK(BM_Propagate)->Arg(256)->Arg(512)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_PropagateTrain(benchmark::State& state) {
  const auto f = gaussian_beam(1e-3, 1024, 20e-6);
  OpticalTrain t;
  t.free(0.25).lens(0.25).free(0.5).lens(0.25).free(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_train(f, kPump, t));
}
BENCHMARK(BM_PropagateTrain)->Unit(benchmark::kMillisecond);

void BM_OracleDirect(benchmark::State& state) {
  const auto f = gaussian_beam(250e-6, 64, 50e-6);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_fresnel_direct(f, kPump, 0.45));
}
BENCHMARK(BM_OracleDirect)->Unit(benchmark::kMillisecond);

// Detector scan with finite apertures; the argument is the aperture radius in um.
void BM_ScanDetector(benchmark::State& state) {
  const auto w = apply_mask(gaussian_beam(1e-3, 1024, 10e-6), wire_mask(0.2e-3, 1024, 10e-6));
  const auto law = free_rate_law(w, kPump.k(), 1.0, true);
  const double radius = static_cast<double>(state.range(0)) * 1e-6;
  const DetectorSpec moving{DetectorRole::Signal, {}, radius};
  const DetectorSpec fixed{DetectorRole::Idler, {}, radius};
  const ScanSpec spec{Axis::X, -1e-3, 1e-3, 10e-6};
  for (auto _ : state) benchmark::DoNotOptimize(scan_detector(law, spec, moving, fixed));
}
BENCHMARK(BM_ScanDetector)->Arg(0)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_DesignTelescope(benchmark::State& state) {
  const std::vector<double> catalog{0.1, 0.15, 0.25, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(design_telescope(3.0, -1.0, catalog));
}
BENCHMARK(BM_DesignTelescope)->Unit(benchmark::kMillisecond);

void BM_SampleCounts(benchmark::State& state) {
  CoincidenceProfile p;
  for (int k = 0; k < 201; ++k) {
    p.coordinates.push_back(k * 1e-5);
    p.rates.push_back(1000.0);
  }
  CountingConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(sample_counts(p, cfg));
}
BENCHMARK(BM_SampleCounts)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
