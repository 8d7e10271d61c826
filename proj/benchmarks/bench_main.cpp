#include <benchmark/benchmark.h>

#include <cmath>

#include "conecap/capacity.hpp"
#include "conecap/quadrature.hpp"
#include "conecap/radial_oracle.hpp"

using namespace conecap;

namespace {

ManifoldModel offset_model() {
  return make_model(
      3, {{"E1", WarpProfile::offset_profile(1.0, 0.5), LinkSpec::round(1.0)}});
}

void BM_AdaptiveQuadrature(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_value(
        [](double s) { return std::pow(s + 0.5, -4.0); }, 1.0, 1e3));
  }
}
BENCHMARK(BM_AdaptiveQuadrature);

void BM_RadialPotential(benchmark::State& state) {
  const auto m = offset_model();
  const double p = 1.0 + state.range(0) / 1000.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(radial_potential(m, "E1", 1.0, p));
  }
}
BENCHMARK(BM_RadialPotential)->Arg(1000)->Arg(100)->Arg(25);

void BM_GridBuild(benchmark::State& state) {
  const auto m = offset_model();
  const auto d = DomainSpec::sublevel(1.0);
  const auto radial = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_grid(m, d, "E1", 64.0, radial, radial / 4, 1.05));
  }
}
BENCHMARK(BM_GridBuild)->Arg(64)->Arg(128)->Arg(256);

void BM_SolveHarmonic(benchmark::State& state) {
  const auto m = make_model(
      3, {{"E1", WarpProfile::cone(1.0), LinkSpec::round(1.0)}});
  const auto d = DomainSpec::sublevel(1.0);
  const auto radial = static_cast<std::size_t>(state.range(0));
  const auto g = build_grid(m, d, "E1", 32.0, radial, radial / 8, 1.05);
  SolverConfig cfg;
  cfg.p = 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_p_laplace(m, d, g, cfg));
  }
}
BENCHMARK(BM_SolveHarmonic)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SolveDegenerate(benchmark::State& state) {
  const auto m = make_model(
      3, {{"E1", WarpProfile::cone(1.0), LinkSpec::round(0.9)}});
  const auto d = DomainSpec::sublevel(1.0);
  const auto g = build_grid(m, d, "E1", 32.0, 96, 12, 1.05);
  SolverConfig cfg;
  cfg.p = 1.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_p_laplace(m, d, g, cfg));
  }
}
BENCHMARK(BM_SolveDegenerate)->Unit(benchmark::kMillisecond);

void BM_FluxCapacity(benchmark::State& state) {
  const auto m = make_model(
      3, {{"E1", WarpProfile::cone(1.0), LinkSpec::round(1.0)}});
  const auto d = DomainSpec::sublevel(1.0);
  const auto g = build_grid(m, d, "E1", 32.0, 128, 16, 1.05);
  SolverConfig cfg;
  cfg.p = 2.0;
  const auto field = solve_p_laplace(m, d, g, cfg).first;
  for (auto _ : state) {
    benchmark::DoNotOptimize(flux_capacity_at(field, 8.0));
  }
}
BENCHMARK(BM_FluxCapacity);

}  // namespace

BENCHMARK_MAIN();
