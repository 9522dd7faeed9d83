#include <benchmark/benchmark.h>

#include "gdag/dsep.hpp"
#include "gdag/enumerate.hpp"
#include "gdag/known_graphs.hpp"

using namespace gdag;

static void BM_DSeparatedTriangle(benchmark::State& state)
{
    const GDag g = graphs::triangle();
    const NodeSet obs = g.observed();
    const int a = obs.front();
    const NodeSet rest = obs - NodeSet::single(a);
    for (auto _ : state) {
        benchmark::DoNotOptimize(d_separated(g, NodeSet::single(a), NodeSet::single(rest.front()), rest - NodeSet::single(rest.front())));
    }
}
BENCHMARK(BM_DSeparatedTriangle);

static void BM_ObservableCISet(benchmark::State& state)
{
    const GDag g = graphs::separation_example();
    for (auto _ : state) {
        benchmark::DoNotOptimize(observable_ci_set(g));
    }
}
BENCHMARK(BM_ObservableCISet);

static void BM_Enumerate(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        std::size_t count = 0;
        for_each_gdag(n, [&](const GDag&) { ++count; });
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_Enumerate)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
