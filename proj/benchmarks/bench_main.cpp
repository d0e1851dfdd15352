#include <benchmark/benchmark.h>

#include "qsr/generator.hpp"
#include "qsr/qcn.hpp"

namespace {

qsr::ProblemInstance make_instance(const qsr::Calculus& calc, int k, int b) {
  qsr::Rng rng(qsr::Rng::child_seed(17, k, b, 0));
  return qsr::generate_instance(calc, k, b, std::nullopt, rng);
}

void BM_AlgebraicClosure(benchmark::State& state) {
  const auto instance = make_instance(qsr::Calculus::rcc8(),
                                      static_cast<int>(state.range(0)),
                                      static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qsr::algebraic_closure(instance.network));
  }
}
BENCHMARK(BM_AlgebraicClosure)->Args({2, 1})->Args({4, 2})->Args({8, 3})->Args({10, 4});

void BM_AlgebraicClosureNaive(benchmark::State& state) {
  const auto instance = make_instance(qsr::Calculus::rcc8(),
                                      static_cast<int>(state.range(0)),
                                      static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qsr::algebraic_closure_naive(instance.network));
  }
}
BENCHMARK(BM_AlgebraicClosureNaive)->Args({4, 2})->Args({8, 3});

void BM_GenerateInstance(benchmark::State& state) {
  uint64_t index = 0;
  for (auto _ : state) {
    qsr::Rng rng(qsr::Rng::child_seed(99, state.range(0), state.range(1), index++));
    benchmark::DoNotOptimize(qsr::generate_instance(
        qsr::Calculus::rcc8(), static_cast<int>(state.range(0)),
        static_cast<int>(state.range(1)), std::nullopt, rng));
  }
}
BENCHMARK(BM_GenerateInstance)->Args({2, 1})->Args({3, 3})->Args({6, 2});

void BM_EnumeratePaths(benchmark::State& state) {
  const auto instance = make_instance(qsr::Calculus::ia(),
                                      static_cast<int>(state.range(0)),
                                      static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qsr::enumerate_simple_paths(
        instance.network, instance.source, instance.tail));
  }
}
BENCHMARK(BM_EnumeratePaths)->Args({3, 3})->Args({5, 4});

}  // namespace

BENCHMARK_MAIN();
