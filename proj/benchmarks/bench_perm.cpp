#include <benchmark/benchmark.h>

#include "htlab/perm.hpp"

using namespace htlab;

static void BM_SubgroupClasses(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(perm::subgroup_classes(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SubgroupClasses)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_GroupOrder(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    perm::PermGroup g = perm::PermGroup::symmetric(n);
    benchmark::DoNotOptimize(g.order());
  }
}
BENCHMARK(BM_GroupOrder)->Arg(6)->Arg(8)->Arg(12)->Arg(16);

static void BM_Blocks(benchmark::State& state) {
  const perm::PermGroup h(8, {perm::Perm::parse(8, "(0 1 2 3 4 5 6 7)"), perm::Perm::parse(8, "(1 7)(2 6)(3 5)")});
  for (auto _ : state)
    benchmark::DoNotOptimize(perm::block_systems(h));
}
BENCHMARK(BM_Blocks);

BENCHMARK_MAIN();
