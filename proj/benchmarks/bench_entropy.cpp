#include <benchmark/benchmark.h>

#include "gdag/entropy_cone.hpp"
#include "gdag/known_graphs.hpp"

using namespace gdag;

static void BM_ElementalInequalities(benchmark::State& state)
{
    std::vector<std::string> vars;
    for (int i = 0; i < state.range(0); ++i) {
        vars.push_back("V" + std::to_string(i));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(elemental_inequalities(vars));
    }
}
BENCHMARK(BM_ElementalInequalities)->DenseRange(3, 6);

static void BM_BellClassicalCone(benchmark::State& state)
{
    const GDag g = graphs::bell();
    for (auto _ : state) {
        benchmark::DoNotOptimize(derive_classical_cone(g));
    }
}
BENCHMARK(BM_BellClassicalCone)->Unit(benchmark::kMillisecond);

static void BM_ImpliedBy(benchmark::State& state)
{
    const GDag g = graphs::bell();
    const Cone ec = derive_classical_cone(g);
    const Cone ei = derive_independence_cone(g);
    for (auto _ : state) {
        for (const auto& row : ei.ineqs()) {
            benchmark::DoNotOptimize(implied_by(row, ec));
        }
    }
}
BENCHMARK(BM_ImpliedBy)->Unit(benchmark::kMillisecond);
