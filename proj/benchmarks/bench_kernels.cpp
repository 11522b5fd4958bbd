#include <benchmark/benchmark.h>

#include "ctpower/measures.hpp"
#include "ctpower/qlinalg.hpp"
#include "ctpower/states.hpp"

using namespace ctpower;

namespace {

void BM_TraceNorm(benchmark::State& state) {
  Rng rng(1);
  const int n = static_cast<int>(state.range(0));
  const auto rho = random_density_matrix(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(trace_norm(rho.matrix()));
}
BENCHMARK(BM_TraceNorm)->Arg(1)->Arg(2)->Arg(3);

void BM_Concurrence(benchmark::State& state) {
  Rng rng(2);
  const auto rho = random_density_matrix(2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(concurrence(rho));
}
BENCHMARK(BM_Concurrence);

void BM_FullyEntangledFraction(benchmark::State& state) {
  Rng rng(3);
  const auto rho = random_density_matrix(2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(fully_entangled_fraction(rho));
}
BENCHMARK(BM_FullyEntangledFraction);

void BM_FullyEntangledFractionNumeric(benchmark::State& state) {
  Rng rng(3);
  const auto rho = random_density_matrix(2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(fully_entangled_fraction_numeric(rho));
}
BENCHMARK(BM_FullyEntangledFractionNumeric)->Unit(benchmark::kMillisecond);

// Reduction of an n-qubit pure state to one pair.
void BM_ReducePair(benchmark::State& state) {
  Rng rng(4);
  const auto psi = random_pure_state(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(psi.reduced({1, 2}));
}
BENCHMARK(BM_ReducePair)->DenseRange(3, 8);

}  // namespace
