#include <benchmark/benchmark.h>

#include "nccw/discretize.hpp"
#include "nccw/kernels.hpp"

namespace {

using namespace nccw;

fd::Morphism cylinder_projection(int n) {
  const auto m2 = expr::finite_dim({2});
  const auto cyl = expr::mapping_construction(expr::Mapping::Cylinder, expr::identity(m2));
  return disc::discretize_morphism(expr::projection_second(cyl), {n});
}

void BM_StarHomSerial(benchmark::State& state) {
  const fd::Morphism f = cylinder_projection(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::star_hom_residual_serial(f));
}

void BM_StarHomParallel(benchmark::State& state) {
  const fd::Morphism f = cylinder_projection(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::star_hom_residual_parallel(f));
}

void BM_ApplyColumns(benchmark::State& state) {
  const fd::Morphism f = cylinder_projection(static_cast<int>(state.range(0)));
  const Matrix xs = f.domain().basis();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::apply_columns_parallel(f, xs));
}

}  // namespace

BENCHMARK(BM_StarHomSerial)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(BM_StarHomParallel)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(BM_ApplyColumns)->Arg(4)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
