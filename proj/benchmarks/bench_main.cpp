#include <benchmark/benchmark.h>

#include <cmath>

#include "numphase/criteria.hpp"
#include "numphase/fock.hpp"
#include "numphase/observables.hpp"
#include "numphase/phase_povm.hpp"

using namespace numphase;

static void BM_ObserveTmss(benchmark::State& st) {
  const auto s = auto_two_mode_squeezed_state(static_cast<double>(st.range(0)) / 10);
  for (auto _ : st) benchmark::DoNotOptimize(observe(s));
  st.SetLabel("cutoff " + std::to_string(s.cutoff()));
}
BENCHMARK(BM_ObserveTmss)->Arg(5)->Arg(10)->Arg(15);

static void BM_ObserveGaussianMixture(benchmark::State& st) {
  const double mean = static_cast<double>(st.range(0));
  const auto mix = mixture_over_sector_states(gaussian_distribution(mean, std::sqrt(mean / 2)),
                                              [](int n) { return number_phase_sector(n, 0.0); });
  for (auto _ : st) benchmark::DoNotOptimize(observe(mix));
}
BENCHMARK(BM_ObserveGaussianMixture)->Arg(100)->Arg(400)->Arg(1000);

static void BM_BuildGaussianMixture(benchmark::State& st) {
  const double mean = static_cast<double>(st.range(0));
  for (auto _ : st) {
    benchmark::DoNotOptimize(mixture_over_sector_states(gaussian_distribution(mean, std::sqrt(mean / 2)),
                                                        [](int n) { return number_phase_sector(n, 0.0); }));
  }
}
BENCHMARK(BM_BuildGaussianMixture)->Arg(400);

static void BM_RelativeDensityPure(benchmark::State& st) {
  const auto s = split_fock_state(static_cast<int>(st.range(0)), 0.0, 0.5);
  const int K = default_grid_size(s.cutoff());
  for (auto _ : st) benchmark::DoNotOptimize(relative_phase_density(s, K));
}
BENCHMARK(BM_RelativeDensityPure)->Arg(10)->Arg(50)->Arg(200);

static void BM_RelativeDensityMixture(benchmark::State& st) {
  const auto mix = mixture_over_sector_states(poissonian_distribution(static_cast<double>(st.range(0))),
                                              [](int n) { return number_phase_sector(n, 0.0); });
  const int K = default_grid_size(phase_degree(mix));
  for (auto _ : st) benchmark::DoNotOptimize(relative_phase_density(mix, K));
}
BENCHMARK(BM_RelativeDensityMixture)->Arg(5)->Arg(50);

static void BM_JointDensity(benchmark::State& st) {
  const auto s = number_phase_state(static_cast<int>(st.range(0)), 0.0);
  const int K = default_grid_size(s.cutoff());
  for (auto _ : st) benchmark::DoNotOptimize(joint_local_phase_density(s, K));
}
BENCHMARK(BM_JointDensity)->Arg(3)->Arg(30);

static void BM_LinearPhaseVariance(benchmark::State& st) {
  const auto d = relative_phase_density(number_phase_state(100, 0.0), 512);
  for (auto _ : st) benchmark::DoNotOptimize(linear_phase_variance(d));
}
BENCHMARK(BM_LinearPhaseVariance);

static void BM_SampleShots(benchmark::State& st) {
  const LocalPhaseSampler sampler(number_phase_state(3, 0.0));
  const auto shots = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sampler.sample(shots, 42));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations()) * st.range(0));
}
BENCHMARK(BM_SampleShots)->Arg(100000);

static void BM_SampleMixtureShots(benchmark::State& st) {
  const auto mix = mixture_over_sector_states(poissonian_distribution(5.0),
                                              [](int n) { return number_phase_sector(n, 0.0); });
  const LocalPhaseSampler sampler(mix);
  for (auto _ : st) benchmark::DoNotOptimize(sampler.sample(100000, 42));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations()) * 100000);
}
BENCHMARK(BM_SampleMixtureShots);

static void BM_BootstrapEstimate(benchmark::State& st) {
  const auto smp = sample_local_phases(number_phase_state(3, 0.0), static_cast<std::size_t>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(estimate_relative_dispersion(smp.phi1, smp.phi2));
}
BENCHMARK(BM_BootstrapEstimate)->Arg(10000)->Arg(100000);
BENCHMARK_MAIN();
