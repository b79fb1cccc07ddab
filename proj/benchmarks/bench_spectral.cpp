#include <benchmark/benchmark.h>

#include "ampeq/experiment.hpp"
#include "ampeq/spde.hpp"

using namespace ampeq;

static void BM_ApplyF(benchmark::State& state) {
    SpectralSystem sys(Preset::LaplacianPeriodic,
                       static_cast<int>(state.range(0)), 1.0);
    Field u(sys.modes());
    u.at(0) = 0.3;
    u.at(1) = std::complex<double>(0.1, 0.05);
    u.at(-1) = std::conj(u.at(1));
    for (auto _ : state) {
        Field r = sys.apply_F(u);
        benchmark::DoNotOptimize(r.coeffs.data());
    }
}
BENCHMARK(BM_ApplyF)->Arg(16)->Arg(32)->Arg(64);

static void BM_SolveSpdeStep(benchmark::State& state) {
    SpectralSystem sys(Preset::LaplacianPeriodic, 32, 1.0);
    const HurstParam H(0.5);
    const GridSpec grid = choose_grids(1.0, 0.2);
    const QFbmField noise = generate_qfbm(H, 32, Spectrum::power_law(2.0),
                                          grid.n_fast, grid.dt_fast, 7);
    Field u0(sys.modes());
    u0.at(0) = 0.05;
    for (auto _ : state) {
        SpdeRun run = solve_spde(sys, noise, grid, u0, grid.fast_per_slow);
        benchmark::DoNotOptimize(run.trajectory.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(grid.n_fast));
}
BENCHMARK(BM_SolveSpdeStep);
