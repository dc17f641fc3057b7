#include <benchmark/benchmark.h>

#include "htlab/suspension.hpp"

using namespace htlab;

static void BM_LegalWords(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    // A fresh system each time so the cache does not hide the work.
    auto X = flow::StoneSystem::substitution({{'a', "ab"}, {'b', "a"}});
    benchmark::DoNotOptimize(X.legal_words(n).size());
  }
}
BENCHMARK(BM_LegalWords)->Arg(16)->Arg(64)->Arg(256);

static void BM_FirstReturn(benchmark::State& state) {
  const auto X = flow::StoneSystem::substitution({{'a', "abc"}, {'b', "ac"}, {'c', "b"}});
  const flow::CylinderX C{"abca", 0};
  for (auto _ : state)
    benchmark::DoNotOptimize(flow::first_return_partition(X, C));
}
BENCHMARK(BM_FirstReturn);

BENCHMARK_MAIN();
