#include <benchmark/benchmark.h>

#include "gkq/siegel.hpp"

using namespace gkq;

namespace {

GramMatrix rank2() { return diagonal_gram(3, {1, 9}); }

void BM_DensitySerial(benchmark::State& st) {
    GramMatrix L = rank2();
    for (auto _ : st) benchmark::DoNotOptimize(density_count_serial(L, 2, static_cast<int>(st.range(0))));
}

void BM_DensityParallel(benchmark::State& st) {
    GramMatrix L = rank2();
    for (auto _ : st) benchmark::DoNotOptimize(density_count_parallel(L, 2, static_cast<int>(st.range(0))));
}

void BM_SiegelSeries(benchmark::State& st) {
    GramMatrix L = diagonal_gram(3, {1, 3, static_cast<long>(st.range(0))});
    for (auto _ : st) benchmark::DoNotOptimize(siegel_series(L));
}

}  // namespace

BENCHMARK(BM_DensitySerial)->Arg(1)->Arg(2)->Arg(3);
BENCHMARK(BM_DensityParallel)->Arg(1)->Arg(2)->Arg(3);
BENCHMARK(BM_SiegelSeries)->Arg(9)->Arg(81)->Arg(729);

BENCHMARK_MAIN();
