#include "twophase/constitutive.hpp"
#include "twophase/pde_solver.hpp"
#include "twophase/tw_solver.hpp"

#include <benchmark/benchmark.h>

using namespace twophase;

namespace {

Model reference(double tau) {
  return {{{3.5, 0.92}, {7.0, 0.9}, tau}, preset_permeability(FluxPreset::brooks_corey), 1.0, 1.0};
}

Model hysteretic(double tau) {
  return {{{3.5, 0.92}, {7.0, 0.9}, tau}, preset_permeability(FluxPreset::hysteretic_bc), 1.0, 0.0};
}

void flux_branch(benchmark::State& state) {
  const Model m = reference(1.0);
  double S = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.flux(Branch::imbibition, S).F);
    S = S < 0.9 ? S + 1e-3 : 0.1;
  }
}
BENCHMARK(flux_branch);

void flux_scanning(benchmark::State& state) {
  const Model m = hysteretic(0.5);
  const double S = 0.5;
  const double p = 0.5 * (m.pc(Branch::imbibition, S) + m.pc(Branch::drainage, S));
  for (auto _ : state) benchmark::DoNotOptimize(m.flux(S, p).F);
}
BENCHMARK(flux_scanning);

void shoot_S_m(benchmark::State& state) {
  const TwOptions opt{.memoize = false};
  const TravelingWaveSolver tw(FluxGeometry(reference(0.0), 0.1), opt);
  const double tau = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(tw.S_m(tau, 0.4));
}
BENCHMARK(shoot_S_m)->Arg(5)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

void pde_step(benchmark::State& state) {
  SolverConfig cfg;
  cfg.t_end = 1e9;
  const double dz = 510.0 / static_cast<double>(state.range(0));
  const PdeSolver pde({reference(1.0), 0.1, 0.55}, Grid::with_spacing(-10.0, 500.0, dz), cfg);
  GridState st = pde.initial_state();
  for (auto _ : state) benchmark::DoNotOptimize(pde.step(st, pde.dt()).iterations);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(pde_step)->Arg(2550)->Arg(10200)->Unit(benchmark::kMicrosecond);

void pde_step_hysteretic(benchmark::State& state) {
  SolverConfig cfg;
  cfg.t_end = 1e9;
  cfg.bc_mode = Scenario::B;
  const PdeSolver pde({hysteretic(0.5), 0.3, 0.5}, Grid::with_spacing(-10.0, 190.0, 0.05), cfg);
  GridState st = pde.initial_state();
  for (auto _ : state) benchmark::DoNotOptimize(pde.step(st, pde.dt()).iterations);
}
BENCHMARK(pde_step_hysteretic)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
