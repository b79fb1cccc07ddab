#include <benchmark/benchmark.h>

#include "ampeq/fbm.hpp"

using namespace ampeq;

static void BM_GenerateFbm(benchmark::State& state) {
    const HurstParam H(0.3);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        FbmPath p = generate_fbm(H, n, 1.0 / static_cast<double>(n), seed++);
        benchmark::DoNotOptimize(p.values.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_GenerateFbm)->Range(1 << 10, 1 << 16);

static void BM_GenerateQfbm(benchmark::State& state) {
    const HurstParam H(0.5);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        QFbmField q = generate_qfbm(H, 32, Spectrum::power_law(2.0), n,
                                    1.0 / static_cast<double>(n), seed++);
        benchmark::DoNotOptimize(q.component_paths.data());
    }
}
BENCHMARK(BM_GenerateQfbm)->Range(1 << 10, 1 << 14);

BENCHMARK_MAIN();
