#include <benchmark/benchmark.h>

#include "mlsa/finite_model.hpp"
#include "mlsa/kernels.hpp"
#include "mlsa/msa.hpp"
#include "mlsa/stationary.hpp"
#include "mlsa/variance.hpp"

using namespace mlsa;

namespace {

model::FiniteLevelModel make(std::size_t m) {
  model::ModelSpec s;
  s.m = m;
  return model::build_model(s);
}

void BM_KernelMatrix(benchmark::State& state) {
  const auto m = make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(model::kernel_matrix(m, Level(4), 0.5));
}
BENCHMARK(BM_KernelMatrix)->Arg(32)->Arg(128);

void BM_CoupledKernel(benchmark::State& state) {
  const auto m = make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(model::coupled_kernel_matrix(m, Level(4), 0.5, 0.4));
}
BENCHMARK(BM_CoupledKernel)->Arg(16)->Arg(32);

void BM_CoupledStationary(benchmark::State& state) {
  const auto m = make(static_cast<std::size_t>(state.range(0)));
  const auto K = model::coupled_kernel_matrix(m, Level(4), 0.5, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::stationary(K));
}
BENCHMARK(BM_CoupledStationary)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ExactVariance(benchmark::State& state) {
  const auto m = make(32);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::asymptotic_variance_exact(m, Level(3)).sigma);
}
BENCHMARK(BM_ExactVariance)->Unit(benchmark::kMillisecond);

void BM_MsaSteps(benchmark::State& state) {
  const auto m = make(32);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const auto sched = StepSchedule::polynomial(1.0, 0.75, n);
  sa::RunOptions o;
  o.record_paths = false;
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(sa::msa_run(m, Level(3), sched, ReprojectionFamily(2.0, 1.0), n, ++seed, o).final_theta);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MsaSteps)->Arg(100000);

void BM_CoupledSteps(benchmark::State& state) {
  const auto m = make(32);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const auto sched = StepSchedule::polynomial(1.0, 0.75, n);
  sa::CoupledRunOptions o;
  o.record_paths = false;
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sa::coupled_msa_run(m, Level(3), sched, ReprojectionFamily(2.0, 1.0), n, ++seed, o).final_increment());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CoupledSteps)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
