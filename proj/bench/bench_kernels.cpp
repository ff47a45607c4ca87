#include <benchmark/benchmark.h>

#include <random>

#include "dampwave/kernels.hpp"
#include "dampwave/wave_solver.hpp"

using namespace dampwave;
using kernels::Backend;

namespace {

struct Fixture {
  Grid grid;
  Field u;
  Field v;
  Field a;
  Field out;

  explicit Fixture(int n) : grid(build_grid(DomainSpec::rectangle(1.0, 1.0), 1.0 / n)) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    u = grid.zeros();
    v = grid.zeros();
    a = Field(grid.size(), 1.0);
    out = grid.zeros();
    for (std::size_t idx : grid.interior_nodes()) {
      u[idx] = dist(rng);
      v[idx] = dist(rng);
    }
  }
};

kernels::Ops ops_for(const benchmark::State& state) {
  return {state.range(1) == 0 ? Backend::reference : Backend::parallel};
}

void BM_Laplacian(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  const kernels::Ops ops = ops_for(state);
  for (auto _ : state) {
    ops.laplacian(f.grid, f.u, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.interior_count()));
}

void BM_DampingSubstep(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  const kernels::Ops ops = ops_for(state);
  const DampingLaw law = DampingLaw::saturating();
  for (auto _ : state) {
    ops.damping_substep(f.grid, law, f.a, {}, 0.0, 1e-3, f.v);
    benchmark::DoNotOptimize(f.v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.interior_count()));
}

void BM_GradientEnergy(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  const kernels::Ops ops = ops_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(ops.gradient_energy(f.grid, f.u));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid.interior_count()));
}

void BM_Step(benchmark::State& state) {
  SimConfig c;
  c.grid = build_grid(DomainSpec::rectangle(1.0, 1.0), 1.0 / static_cast<double>(state.range(0)));
  c.a = Field(c.grid.size(), 1.0);
  c.law = DampingLaw::saturating();
  c.dt = c.max_dt();
  c.horizon = 1.0;
  c.initial_u = InitialRule::eigenmode(1, 1, 1.0);
  c.backend = state.range(1) == 0 ? Backend::reference : Backend::parallel;
  const WaveSolver solver(c);
  WaveState s = solver.initial_state();
  for (auto _ : state) {
    solver.step(s);
    benchmark::DoNotOptimize(s.u.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(c.grid.interior_count()));
}

// second argument: 0 = reference, 1 = parallel
#define BACKENDS(bm) BENCHMARK(bm)->ArgsProduct({{128, 512, 1024}, {0, 1}})->ArgNames({"n", "parallel"})

BACKENDS(BM_Laplacian);
BACKENDS(BM_DampingSubstep);
BACKENDS(BM_GradientEnergy);
BACKENDS(BM_Step);

}  // namespace

BENCHMARK_MAIN();
