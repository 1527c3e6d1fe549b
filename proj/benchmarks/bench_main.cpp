#include <benchmark/benchmark.h>

#include <cmath>

#include "cvf/initial_condition.hpp"
#include "cvf/operators.hpp"
#include "cvf/picard.hpp"

using namespace cvf;

namespace {

ScalarField wavy(const Grid& g) {
  ScalarField f(g);
  for (int iz = 0; iz < g.nz(); ++iz)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nx(); ++ix)
        f[g.index(ix, iy, iz)] = std::sin(g.coord(0, ix)) * std::cos(2 * g.coord(1, iy) + g.coord(2, iz));
  return f;
}

FlowState small_data(SpectralWorkspace& ws) {
  ICSpec s;
  s.amplitude = 1e-2;
  s.velocity_amplitude = 1e-2;
  s.modes = {{1, 0, 0}, {0, 3, 1}, {2, -1, 1}};
  s.seed = 7;
  return generate_ic(s, ws.grid(), PhysParams{}, ws).state;
}

void BM_fft_round_trip(benchmark::State& state) {
  const Grid g = Grid::cube(static_cast<int>(state.range(0)));
  SpectralWorkspace ws(g);
  ScalarField f = wavy(g);
  SpectralBuffer hat(ws.modes());
  for (auto _ : state) {
    ws.forward(f.data(), hat);
    ws.inverse(hat, f.data());
    benchmark::DoNotOptimize(f.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}

void BM_gradient(benchmark::State& state) {
  const Grid g = Grid::cube(static_cast<int>(state.range(0)));
  SpectralWorkspace ws(g);
  const ScalarField f = wavy(g);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(ws, f));
}

void BM_lame_solve(benchmark::State& state) {
  const Grid g = Grid::cube(static_cast<int>(state.range(0)));
  SpectralWorkspace ws(g);
  VectorField w(g);
  const ScalarField f = wavy(g);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t p = 0; p < g.size(); ++p) w(c, p) = f[p] * static_cast<double>(c + 1);
  for (auto _ : state) benchmark::DoNotOptimize(lame_solve(ws, w, 1.0, 0.5));
}

void BM_picard_step(benchmark::State& state) {
  const Grid g = Grid::cube(static_cast<int>(state.range(0)));
  SpectralWorkspace ws(g);
  const FlowState s = small_data(ws);
  StepOptions o;
  o.momentum.theta = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(picard_step(ws, s, 1e-3, PhysParams{}, o));
}

}  // namespace

BENCHMARK(BM_fft_round_trip)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_gradient)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_lame_solve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_picard_step)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
