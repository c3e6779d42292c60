#include <benchmark/benchmark.h>

#include "driftspec/assembly.hpp"
#include "driftspec/geometry.hpp"

using namespace driftspec;

static void BM_AssembleDrift1D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const IntervalMesh mesh = build_interval_mesh(IntervalDomain(0.0, 1.0), n);
  const WeightSpec w = WeightSpec::from_phi_text("x + 0.3*sin(4*x)");
  for (auto _ : state) {
    OperatorPencil p = assemble_drift_1d(mesh, w, BoundaryCondition::neumann);
    benchmark::DoNotOptimize(p.stiffness.valuePtr());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleDrift1D)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_AssembleThin2D(benchmark::State& state) {
  const auto nx = static_cast<std::size_t>(state.range(0));
  const ThinDomainSpec spec{IntervalDomain(0.0, 1.0), WeightSpec::from_phi_text("x"), 0.05};
  const MappedGrid grid = build_mapped_grid(spec, nx, 8);
  for (auto _ : state) {
    OperatorPencil p = assemble_thin_2d(grid);
    benchmark::DoNotOptimize(p.mass.valuePtr());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(nx * 8));
}
BENCHMARK(BM_AssembleThin2D)->Arg(100)->Arg(400)->Arg(1600);
