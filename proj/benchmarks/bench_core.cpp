#include <benchmark/benchmark.h>

#include "wdc/criteria.hpp"

namespace {

using namespace wdc;

analytic::TaylorFunction one() {
  return analytic::TaylorFunction::constant(Complex{1.0, 0.0});
}

analytic::TaylorFunction identity_map() {
  return analytic::TaylorFunction({Complex{0.0, 0.0}, Complex{1.0, 0.0}});
}

void BM_HardyNorm(benchmark::State& state) {
  const auto f = analytic::test_function(Complex{0.8, 0.1}, 0.5, 1);
  const spaces::QuadratureConfig q;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spaces::hardy_norm(f, 2.0, q));
  }
}
BENCHMARK(BM_HardyNorm);

void BM_BergmanNorm(benchmark::State& state) {
  const auto f = analytic::test_function(Complex{0.8, 0.1}, 1.0, 1);
  const spaces::QuadratureConfig q;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spaces::bergman_norm(f, 2.0, 0.0, q));
  }
}
BENCHMARK(BM_BergmanNorm);

void BM_WeightedSup(benchmark::State& state) {
  const auto f = analytic::monomial(static_cast<int>(state.range(0)));
  const auto nu = spaces::Weight::power(1.0);
  const spaces::DiskGrid grid;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spaces::weighted_sup_norm(f, nu, grid));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WeightedSup)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_TestFunctionJet(benchmark::State& state) {
  const analytic::TestFunction f(Complex{0.9, 0.05}, 1.5, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.jet(Complex{0.3, 0.4}, 6));
  }
}
BENCHMARK(BM_TestFunctionJet);

void BM_BoundednessMk(benchmark::State& state) {
  const auto S = ops::OperatorSpec::validated({one(), identity_map()},
                                              identity_map());
  const auto space = spaces::SpaceSpec::hardy(2.0);
  const auto nu = spaces::Weight::power(1.0);
  criteria::CriteriaConfig cfg;
  cfg.shells = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(criteria::boundedness_Mk(S, space, nu, 1, cfg));
  }
}
BENCHMARK(BM_BoundednessMk)->Arg(8)->Arg(12)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
