#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dirac/quadrature.hpp"

using namespace dirac;

namespace {

void BM_AdaptiveOscillatory(benchmark::State& st) {
  auto f = [](double x) { return std::sin(x * x) * std::exp(-0.1 * x); };
  for (auto _ : st) benchmark::DoNotOptimize(integrate_adaptive(f, 0, 10, 1e-12).value);
}
BENCHMARK(BM_AdaptiveOscillatory);

void BM_PowerTail(benchmark::State& st) {
  auto f = [](double x) { return 1 / (x * x * x); };
  for (auto _ : st)
    benchmark::DoNotOptimize(integrate_to_infinity(f, 1, 1e-10, DecayHint::power(3)).value);
}
BENCHMARK(BM_PowerTail);

void BM_Cumulative(benchmark::State& st) {
  std::vector<double> g{0};
  for (int i = 1; i <= st.range(0); ++i) g.push_back(0.05 * i);
  auto f = [](double x) { return std::cos(x) * std::exp(-0.2 * x); };
  for (auto _ : st) benchmark::DoNotOptimize(cumulative_integral(f, g, 1e-11).back());
}
BENCHMARK(BM_Cumulative)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
