#include <benchmark/benchmark.h>

#include <numbers>

#include "polaronlab/coherence.hpp"
#include "polaronlab/dynamics.hpp"
#include "polaronlab/histogram.hpp"
#include "polaronlab/phonon.hpp"

using namespace polaronlab;

namespace {

const PhononCoupling coupling = PhononCoupling::nominal();
const EmitterParams emitter = EmitterParams::from_lifetime_ps(730.0);

void BM_FranckCondon(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(phonon::franck_condon(coupling, t));
}
BENCHMARK(BM_FranckCondon)->Arg(5)->Arg(20);

void BM_VirtualDephasingRate(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(phonon::virtual_dephasing_rate(coupling, t));
}
BENCHMARK(BM_VirtualDephasingRate)->Arg(5)->Arg(20);

void BM_KernelTable(benchmark::State& state) {
  for (auto _ : state) {
    const phonon::KernelTable table(coupling, 5.6);
    benchmark::DoNotOptimize(table.franck_condon());
  }
}
BENCHMARK(BM_KernelTable)->Unit(benchmark::kMillisecond);

void BM_RateFunctions(benchmark::State& state) {
  const phonon::KernelTable table(coupling, 5.6);
  for (auto _ : state) benchmark::DoNotOptimize(table.rate_functions(1.3));
}
BENCHMARK(BM_RateFunctions)->Unit(benchmark::kMicrosecond);

void BM_SimulatePulse(benchmark::State& state) {
  const PulseSpec pulse(std::numbers::pi, 1.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynamics::simulate_pulse(pulse, coupling, 5.6, emitter));
  }
}
BENCHMARK(BM_SimulatePulse)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const double g = phonon::virtual_dephasing_rate(coupling, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coherence::indistinguishability_oracle(emitter.gamma_emission(), g));
  }
}
BENCHMARK(BM_Oracle)->Unit(benchmark::kMillisecond);

void BM_ThreeLevel(benchmark::State& state) {
  const PumpLevel pump{1.0 / 53.0};
  const double g = phonon::virtual_dephasing_rate(coupling, 5.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coherence::three_level_simulation(pump, emitter, g));
  }
}
BENCHMARK(BM_ThreeLevel)->Unit(benchmark::kMillisecond);

void BM_HistogramFit(benchmark::State& state) {
  using namespace histogram;
  std::vector<PeakModel> peaks;
  for (int k = -2; k <= 2; ++k) peaks.emplace_back(12.2 * k, 0.73, 0.15, k == 0 ? 6.0 : 1000.0);
  const auto h = synthesize_histogram(peaks, Binning::centered(31.0, 0.05), 7);
  FitConfig cfg;
  cfg.n_peaks = 5;
  for (auto _ : state) benchmark::DoNotOptimize(fit_histogram(h, cfg));
}
BENCHMARK(BM_HistogramFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
