#include <benchmark/benchmark.h>

#include "ctpower/control_power.hpp"
#include "ctpower/simkit.hpp"

using namespace ctpower;

namespace {

void BM_CtOracleThreeQubit(benchmark::State& state) {
  Rng rng(5);
  const auto psi = random_pure_state(3, rng);
  ProtocolConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(ct_fidelity_oracle(psi, 1, cfg));
}
BENCHMARK(BM_CtOracleThreeQubit)->Unit(benchmark::kMillisecond);

void BM_CtOracleGhz(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto psi = make_ghz(n, 0.6, 0.8);
  const auto parts = all_partitions(n);
  ProtocolConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(ct_fidelity_oracle_n(psi, parts.front(), cfg));
}
BENCHMARK(BM_CtOracleGhz)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_MinimalControlPowerThreeQubit(benchmark::State& state) {
  Rng rng(6);
  const auto psi = random_pure_state(3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(minimal_control_power(psi));
}
BENCHMARK(BM_MinimalControlPowerThreeQubit);

void BM_MinimalControlPowerUniformW(benchmark::State& state) {
  const auto psi = make_uniform_w(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(minimal_control_power(psi));
}
BENCHMARK(BM_MinimalControlPowerUniformW)->DenseRange(4, 8, 2);

void BM_McTeleportation(benchmark::State& state) {
  Rng rng(7);
  const auto rho = random_density_matrix(2, rng);
  ProtocolConfig cfg;
  cfg.mc_samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_teleportation_fidelity(rho, cfg));
}
BENCHMARK(BM_McTeleportation)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
