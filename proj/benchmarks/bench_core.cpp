#include <benchmark/benchmark.h>

#include <memory>

#include "qcorr/elements.hpp"
#include "qcorr/experiments.hpp"
#include "qcorr/sources.hpp"
#include "qcorr/thermal.hpp"

namespace {

using namespace qcorr;

FockKet biphoton_ket(int bins) {
  auto grid = std::make_shared<ModeGrid>(2.356e15, 1e12, bins);
  const BiphotonState pair =
      make_spdc(grid, PumpSpectrum{2.0 * grid->center(), 0.0}, SpdcType::type_ii);
  return spdc_to_fock(pair, biphoton_registry(grid));
}

void bm_beam_splitter(benchmark::State& state) {
  const FockKet ket = biphoton_ket(static_cast<int>(state.range(0)));
  const BeamSplitter bs =
      BeamSplitter::balanced({Path::arm1, Path::arm2}, {Path::out1, Path::out2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_beam_splitter(ket, bs));
  }
}
BENCHMARK(bm_beam_splitter)->Arg(8)->Arg(16)->Arg(32);

void bm_partial_trace(benchmark::State& state) {
  const FockKet ket = biphoton_ket(static_cast<int>(state.range(0)));
  const DensityOperator rho = DensityOperator::from_ket(ket);
  const auto keep = ket.registry()->indices_where(
      [](const ModeLabel& m) { return m.path == Path::arm1; });
  for (auto _ : state) {
    benchmark::DoNotOptimize(rho.partial_trace_keep(keep));
  }
}
BENCHMARK(bm_partial_trace)->Arg(8)->Arg(16);

void bm_hom_sweep(benchmark::State& state) {
  HomConfig config = default_hom_config();
  config.sweep_points = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_hom(config));
  }
}
BENCHMARK(bm_hom_sweep)->Arg(5)->Arg(21);

void bm_gedanken(benchmark::State& state) {
  MzConfig config = default_gedanken_config();
  config.sweep_points = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_gedanken(config));
  }
}
BENCHMARK(bm_gedanken)->Arg(8)->Arg(32);

void bm_g2_scan(benchmark::State& state) {
  auto grid = std::make_shared<ModeGrid>(50.0, 0.5, static_cast<int>(state.range(0)));
  const SpatialField field = SpatialField::plane_waves();
  for (auto _ : state) {
    benchmark::DoNotOptimize(g2_scan(grid, field));
  }
}
BENCHMARK(bm_g2_scan)->Arg(2)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
