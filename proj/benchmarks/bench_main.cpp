#include <benchmark/benchmark.h>

#include "peakon/characteristics.hpp"
#include "peakon/dynamics.hpp"
#include "peakon/fields.hpp"
#include "peakon/grid_solver.hpp"
#include "peakon/quadrature.hpp"

using namespace peakon;

static void BM_eval_P(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Peakon> ps;
  for (std::size_t i = 0; i < n; ++i) ps.push_back({i % 2 ? -0.5 : 1.0, static_cast<double>(i) - 0.5 * n});
  const PeakonEnsemble ens(ps);
  double x = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_P(ens, x));
    x = x > 1.0 ? -1.0 : x + 1e-3;
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_eval_P)->RangeMultiplier(4)->Range(2, 512)->Complexity();

static void BM_trace(benchmark::State& state) {
  const ClosedFormField field(make_ic(1.0, 1.0));
  const TimeGrid grid{0.0, field.ic().T0() + 0.5, 61};
  for (auto _ : state) benchmark::DoNotOptimize(trace(field, 1.5, grid, 1e-10));
}
BENCHMARK(BM_trace)->Unit(benchmark::kMicrosecond);

static void BM_energy_quadrature(benchmark::State& state) {
  const ClosedFormField field(make_ic(1.0, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(energy_quadrature(field, 0.5, 20.0));
}
BENCHMARK(BM_energy_quadrature)->Unit(benchmark::kMicrosecond);

static void BM_grid_step(benchmark::State& state) {
  grid::GridConfig cfg;
  cfg.N = static_cast<std::size_t>(state.range(0));
  const auto s0 = grid::initial_state(make_ic(1.0, 1.0), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(grid::step(s0, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_grid_step)->Arg(1001)->Arg(4001)->Arg(16001)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
