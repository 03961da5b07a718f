#include <benchmark/benchmark.h>

#include "dirac/comparison.hpp"
#include "dirac/radial_solver.hpp"

using namespace dirac;

namespace {

const AngularSector kS3(3, HalfInteger::from_twice(1), -1);

void BM_LineExponential(benchmark::State& st) {
  const Problem p(1, OneDim{}, family::Exponential{0.9, 0.5});
  for (auto _ : st) benchmark::DoNotOptimize(solve_ground(p).energy);
}
BENCHMARK(BM_LineExponential)->Unit(benchmark::kMillisecond);

void BM_WoodsSaxonD8(benchmark::State& st) {
  const Problem p(1, AngularSector(8, HalfInteger::from_twice(3), -1),
                  family::WoodsSaxon{4, 2, 1.2});
  for (auto _ : st) benchmark::DoNotOptimize(solve_ground(p).energy);
}
BENCHMARK(BM_WoodsSaxonD8)->Unit(benchmark::kMillisecond);

void BM_Coulomb(benchmark::State& st) {
  const Problem p(1, kS3, family::Coulomb{0.579});
  for (auto _ : st) benchmark::DoNotOptimize(solve_ground(p).energy);
}
BENCHMARK(BM_Coulomb)->Unit(benchmark::kMillisecond);

void BM_EndToEndCoulombSech(benchmark::State& st) {
  const ComparisonCase c(Problem(1, kS3, family::Coulomb{0.579}),
                         Problem(1, kS3, family::SechSquared{0.3, 0.2}), Base::A);
  for (auto _ : st) benchmark::DoNotOptimize(end_to_end(c).all_consistent);
}
BENCHMARK(BM_EndToEndCoulombSech)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
