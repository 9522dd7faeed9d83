#include <benchmark/benchmark.h>

#include "gdag/classify.hpp"
#include "gdag/enumerate.hpp"
#include "gdag/known_graphs.hpp"

using namespace gdag;

static void BM_SufficientCondition(benchmark::State& state)
{
    const GDag g = state.range(0) == 0 ? graphs::one_sided_bell() : graphs::triangle();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sufficient_condition_holds(g));
    }
}
BENCHMARK(BM_SufficientCondition)->Arg(0)->Arg(1);

static void BM_Reduce(benchmark::State& state)
{
    const GDag g = graphs::instrumental();
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduce(g));
    }
}
BENCHMARK(BM_Reduce);

static void BM_Census(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(classification_census(n));
    }
}
BENCHMARK(BM_Census)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
