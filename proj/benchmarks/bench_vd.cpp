#include <benchmark/benchmark.h>

#include "htlab/dynamics.hpp"
#include "htlab/random.hpp"

using namespace htlab;

static void BM_Compose(benchmark::State& state) {
  random::Rng rng(1);
  const auto cells = static_cast<std::size_t>(state.range(0));
  std::vector<vd::PrefixMap> xs;
  for (int i = 0; i < 64; ++i)
    xs.push_back(random::random_element(rng, 2, cells));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vd::compose(xs[i % 64], xs[(i + 1) % 64]));
    ++i;
  }
}
BENCHMARK(BM_Compose)->Arg(8)->Arg(32)->Arg(128);

static void BM_Brin(benchmark::State& state) {
  random::Rng rng(2);
  std::vector<vd::PrefixMap> xs;
  for (int i = 0; i < 64; ++i)
    xs.push_back(random::random_generator_word(rng, static_cast<std::size_t>(state.range(0))));
  std::size_t i = 0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(vd::brin_decomposition(xs[i % 64]));
    } catch (const std::exception&) {
    }
    ++i;
  }
}
BENCHMARK(BM_Brin)->Arg(3)->Arg(5)->Arg(8);

static void BM_FixedInterior(benchmark::State& state) {
  random::Rng rng(3);
  auto g = random::random_element(rng, 3, 41);
  for (auto _ : state)
    benchmark::DoNotOptimize(vd::fixed_interior(g));
}
BENCHMARK(BM_FixedInterior);

BENCHMARK_MAIN();
