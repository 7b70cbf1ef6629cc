#include <benchmark/benchmark.h>

#include <cmath>

#include "qrlab/catalog.hpp"
#include "qrlab/differential.hpp"
#include "qrlab/distortion.hpp"
#include "qrlab/profile.hpp"
#include "qrlab/quadrature.hpp"
#include "qrlab/regularity.hpp"
#include "qrlab/rng.hpp"

using namespace qrlab;

static void BM_OperatorNorm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CounterRng rng(1);
  SquareMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm(a));
}
BENCHMARK(BM_OperatorNorm)->Arg(2)->Arg(3)->Arg(5)->Arg(8);

static void BM_FiniteDifference(benchmark::State& state) {
  const MappingSpec f = catalog_lookup("radial_stretch", {{"alpha", 0.5}});
  const Vec x{0.3, 0.2};
  for (auto _ : state) benchmark::DoNotOptimize(finite_difference_differential(f, x, 1e-5));
}
BENCHMARK(BM_FiniteDifference);

static void BM_BallIntegral(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Vec center(static_cast<std::size_t>(n), 0.0);
  auto g = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::pow(s, -0.35);
  };
  for (auto _ : state) benchmark::DoNotOptimize(ball_integral(g, center, 0.5).value);
}
BENCHMARK(BM_BallIntegral)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_BallMonteCarlo(benchmark::State& state) {
  const Vec center{0.0, 0.0};
  auto g = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  for (auto _ : state) benchmark::DoNotOptimize(ball_integral_monte_carlo(g, center, 0.5).value);
}
BENCHMARK(BM_BallMonteCarlo)->Unit(benchmark::kMillisecond);

static void BM_FrontierFit(benchmark::State& state) {
  CounterRng rng(2);
  std::vector<DistortionSample> s(static_cast<std::size_t>(state.range(0)));
  for (auto& x : s) {
    x.a = rng.uniform(0.0, 3.0);
    x.b = rng.uniform(0.0, 5.0);
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_minimal_distortion(s).minimal_k1(0.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FrontierFit)->RangeMultiplier(10)->Range(10, 100000)->Complexity();

static void BM_EnergyProfile(benchmark::State& state) {
  const MappingSpec f = catalog_lookup("radial_stretch", {{"alpha", 0.5}});
  const auto radii = default_radii(1.0, 10);
  ProfileOptions opt;
  opt.monte_carlo = false;
  for (auto _ : state) benchmark::DoNotOptimize(energy_profile(f, Vec{0.0, 0.0}, radii, opt).w.back().value);
}
BENCHMARK(BM_EnergyProfile)->Unit(benchmark::kMillisecond);

static void BM_HolderEstimate(benchmark::State& state) {
  const MappingSpec f = catalog_lookup("radial_stretch", {{"alpha", 0.5}});
  const auto v = DomainRegion::ball(Vec{0.0, 0.0}, 0.5);
  HolderOptions opt;
  opt.pair_count = 10000;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_holder(f, v, opt).alpha_hat);
}
BENCHMARK(BM_HolderEstimate)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
