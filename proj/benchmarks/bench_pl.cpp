#include <benchmark/benchmark.h>

#include "htlab/pl.hpp"

using namespace htlab;

namespace {

pl::PLMap thompson_f() {
  return pl::PLMap::on_interval({{Rational(0), Rational(0)},
                                 {Rational(1, 2), Rational(1, 4)},
                                 {Rational(3, 4), Rational(1, 2)},
                                 {Rational(1), Rational(1)}});
}

}  // namespace

static void BM_PLCompose(benchmark::State& state) {
  const auto f = pl::power(thompson_f(), state.range(0));
  const auto g = pl::inverse(f);
  for (auto _ : state)
    benchmark::DoNotOptimize(pl::pl_compose(f, g));
}
BENCHMARK(BM_PLCompose)->Arg(1)->Arg(8)->Arg(32);

static void BM_CrossingProfile(benchmark::State& state) {
  const auto f = pl::power(thompson_f(), 16);
  for (auto _ : state)
    benchmark::DoNotOptimize(pl::crossing_profile(f, Rational(0), Rational(1)));
}
BENCHMARK(BM_CrossingProfile);

BENCHMARK_MAIN();
