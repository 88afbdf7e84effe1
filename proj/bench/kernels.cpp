// Parallel kernels against their one-thread reference path (SerialScope).
// Each fixture first checks that both paths return identical numbers.
#include <benchmark/benchmark.h>

#include <omp.h>

#include <cmath>
#include <random>

#include "optomech/dynamics/correlation.hpp"
#include "optomech/dynamics/hierarchy.hpp"
#include "optomech/noon/probability.hpp"
#include "optomech/numerics/complex_matrix.hpp"
#include "optomech/parallel.hpp"
#include "optomech/transport/spectrum.hpp"

namespace {

using namespace optomech;

// state.range(0): 1 = parallel, 0 = serial reference
template <class Fn>
void run_kernel(benchmark::State& state, Fn&& fn) {
  const bool parallel = state.range(0) != 0;
  std::optional<SerialScope> serial;
  if (!parallel) serial.emplace();
  for (auto _ : state) benchmark::DoNotOptimize(fn());
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}

template <class Fn>
bool same_both_ways(Fn&& fn) {
  const auto par = fn();
  SerialScope serial;
  return par == fn();
}

numerics::ComplexMatrix random_matrix(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  numerics::ComplexMatrix m(n, n);
  for (auto& x : m.data()) x = {z(rng), z(rng)};
  return m;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto a = random_matrix(n, 1), b = random_matrix(n, 2);
  const auto product = [&] {
    const auto c = a * b;
    return std::vector<numerics::Complex>(c.data().begin(), c.data().end());
  };
  if (!same_both_ways(product)) state.SkipWithError("parallel and serial products differ");
  run_kernel(state, [&] { return a * b; });
}
BENCHMARK(BM_Matmul)->ArgsProduct({{0, 1}, {64, 192}})->ArgNames({"parallel", "n"})->Unit(benchmark::kMillisecond);

model::SystemParams fig3() {
  model::SystemParams p;
  p.g = 1.0;
  p.kappa1 = 0.2;
  return p;
}

void BM_AnalyticSpectrum(benchmark::State& state) {
  const auto p = fig3();
  const auto input = transport::SpectralDensity::gaussian(-p.delta_om(), 0.2);
  const auto trunc = model::default_truncation(p);
  const auto spectrum = [&] { return transport::transmitted_spectrum(p, input, 0, {}, trunc).values; };
  if (!same_both_ways(spectrum)) state.SkipWithError("parallel and serial spectra differ");
  run_kernel(state, spectrum);
}
BENCHMARK(BM_AnalyticSpectrum)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_Heatmap(benchmark::State& state) {
  const noon::Range g{0.0, 2.0, 20}, k{0.06, 1.2, 20};
  const auto map = [&] { return noon::probability_heatmap(1, g, k, 0.2, {}, std::nullopt).values; };
  if (!same_both_ways(map)) state.SkipWithError("parallel and serial heatmaps differ");
  run_kernel(state, map);
}
BENCHMARK(BM_Heatmap)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_Correlation(benchmark::State& state) {
  model::SystemParams p;
  p.g = 0.6;
  p.kappa1 = 0.6;
  const model::Truncation trunc{12};
  const auto traj = dynamics::evolve_hierarchy(p, -p.delta_om(), dynamics::PulseShape(0.6), trunc);
  const auto corr = [&] {
    const auto c = dynamics::correlation_grid(traj, trunc);
    return std::vector<numerics::Complex>(c.values.data().begin(), c.values.data().end());
  };
  if (!same_both_ways(corr)) state.SkipWithError("parallel and serial correlations differ");
  run_kernel(state, corr);
}
BENCHMARK(BM_Correlation)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
