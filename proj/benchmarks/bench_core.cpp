#include <benchmark/benchmark.h>

#include <spinbath/env_info.hpp>
#include <spinbath/lee_yang.hpp>
#include <spinbath/witnesses.hpp>

using namespace spinbath;

namespace {

void BM_DecoherenceFunction(benchmark::State& state) {
  const BathParams bath{1.0, 0.1, 1.0, static_cast<int>(state.range(0))};
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decoherence_function(bath, 0.1, t));
    t += 1e-3;
  }
}
BENCHMARK(BM_DecoherenceFunction)->Arg(10)->Arg(1000)->Arg(100000);

void BM_BathPurity(benchmark::State& state) {
  const BathParams bath{1.0, 0.1, 2.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(bath_purity(bath));
}
BENCHMARK(BM_BathPurity)->Arg(12)->Arg(10000);

void BM_BlpSeries(benchmark::State& state) {
  const std::array<QubitDensity, 2> pair{QubitDensity::plus(), QubitDensity::minus()};
  const TimeGrid grid{0.0, recoherence_period(0.1), static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(blp_witness_series(pair, {1.0, 0.1, 4.0, 50}, 0.1, grid));
  }
}
BENCHMARK(BM_BlpSeries)->Arg(201)->Arg(2001);

void BM_LeeYangClosedForm(benchmark::State& state) {
  const BathParams bath{1.0, 0.0, 1.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(zeros_interacting(bath));
}
BENCHMARK(BM_LeeYangClosedForm)->Arg(8)->Arg(64);

void BM_LeeYangCompanion(benchmark::State& state) {
  const BathParams bath{1.0, 0.0, 1.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(zeros_numeric(bath));
}
BENCHMARK(BM_LeeYangCompanion)->Arg(8)->Arg(20);

void BM_CpfOracle(benchmark::State& state) {
  const BathParams bath{1.0, 0.1, 1.0, static_cast<int>(state.range(0))};
  const QubitDensity ground = QubitDensity::pure({1.0, 0.0}, {0.0, 0.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(cpf_oracle(ground, bath, 0.1, 3.0, 5.0, Outcome::plus));
  }
}
BENCHMARK(BM_CpfOracle)->Arg(10)->Arg(16);

void BM_PipNoninteracting(benchmark::State& state) {
  const BathParams bath{0.0, 0.1, 1.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(pip_curve(SystemParams{}, bath, 7.85));
}
BENCHMARK(BM_PipNoninteracting)->Arg(10)->Arg(1000);

void BM_JointStateTransfer(benchmark::State& state) {
  const BathParams bath{1.0, 0.1, 1.0, 200};
  const auto frag = FragmentSpec::prefix(static_cast<int>(state.range(0)), 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(joint_state_general(SystemParams{}, bath, frag, 3.0, JointStatePath::transfer_matrix));
  }
}
BENCHMARK(BM_JointStateTransfer)->Arg(4)->Arg(10);

void BM_PipInteracting(benchmark::State& state) {
  const BathParams bath{1.0, 0.1, 1.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(pip_curve(SystemParams{}, bath, 7.85));
}
BENCHMARK(BM_PipInteracting)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
