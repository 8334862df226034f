#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "nlslab/bounds.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/nls_dynamics.hpp"
#include "nlslab/w_map.hpp"

using namespace nlslab;

namespace {

Field forcing(const SpectralGrid& g) {
  Field f(g);
  for (int k = -1; k <= 1; ++k) f[k] = 1 / std::sqrt(3.0);
  return f;
}

void BM_Cubic(benchmark::State& state) {
  const auto g = SpectralGrid::make(2 * pi, static_cast<int>(state.range(0)));
  const Field u = random_initial_condition(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(cubic(u));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Cubic)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oNLogN);

void BM_Step(benchmark::State& state, Scheme scheme) {
  const int n = static_cast<int>(state.range(0));
  const auto g = SpectralGrid::make(2 * pi, n);
  const NlsParams p{0.5, forcing(g), 0, std::min(n, 8), false};
  // Largest rk4 step inside its stability envelope at this n.
  const double dt = std::min(2.5e-3, 2.8 / (n * n));
  Stepper s(p, {dt, scheme, 1});
  Field u = random_initial_condition(g, 1);
  double t = 0;
  for (auto _ : state) {
    s.step(u, t);
    t += dt;
  }
  benchmark::DoNotOptimize(u);
}
BENCHMARK_CAPTURE(BM_Step, strang, Scheme::strang_splitstep)->RangeMultiplier(2)->Range(8, 128);
BENCHMARK_CAPTURE(BM_Step, rk4, Scheme::rk4_galerkin)->RangeMultiplier(2)->Range(8, 128);

void BM_NudgedStep(benchmark::State& state) {
  const auto g = SpectralGrid::make(2 * pi, 32);
  NlsParams p{0.5, forcing(g), 0, 8, false};
  const Trajectory u = integrate(random_initial_condition(g, 1), p, nullptr, 0, 1, {2.5e-3, Scheme::rk4_galerkin, 1});
  const Trajectory v = project_low_traj(u, p.m);
  p.mu = 10;
  Stepper s(p, {2.5e-3, Scheme::rk4_galerkin, 1}, &v);
  Field w(g);
  std::size_t i = 0;
  for (auto _ : state) {
    s.step(w, 2.5e-3 * static_cast<double>(i));
    if (++i + 1 == v.size()) i = 0, w = Field(g);
  }
  benchmark::DoNotOptimize(w);
}
BENCHMARK(BM_NudgedStep);

void BM_Phi(benchmark::State& state) {
  const auto g = SpectralGrid::make(2 * pi, 32);
  const NlsParams p{0.5, forcing(g), 10, 8, false};
  const Field w = random_initial_condition(g, 2), v = project_low(random_initial_condition(g, 3), 8);
  for (auto _ : state) benchmark::DoNotOptimize(phi(w, v, p));
}
BENCHMARK(BM_Phi);

void BM_ComputeReport(benchmark::State& state) {
  BoundsInput in;
  in.c = 0.8;
  for (auto _ : state) benchmark::DoNotOptimize(compute_report(in));
}
BENCHMARK(BM_ComputeReport);

void BM_AgmonCalibration(benchmark::State& state) {
  const auto g = SpectralGrid::make(2 * pi, 32);
  for (auto _ : state) benchmark::DoNotOptimize(calibrate_agmon_constant(g, 100, 0));
}
BENCHMARK(BM_AgmonCalibration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
