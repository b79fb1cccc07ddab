#include <doctest.h>

#include <cmath>
#include <vector>

#include "ampeq/holder.hpp"
#include "ampeq/rng.hpp"
#include "ampeq/spde.hpp"

using namespace ampeq;

namespace {

QFbmField zero_noise(const HurstParam& H, std::size_t K, std::size_t n,
                     double dt, std::uint64_t seed) {
    return generate_qfbm(H, K, Spectrum::explicit_list(
                                   std::vector<double>(K, 0.0)),
                         n, dt, seed);
}

}  // namespace

TEST_CASE("choose_grids alignment and cap") {
    const GridSpec g = choose_grids(1.0, 0.1, 1024, 0.01);
    CHECK(g.n_fast % g.n_slow == 0);
    CHECK(g.fast_per_slow == g.n_fast / g.n_slow);
    CHECK(g.dt_fast <= 0.01 * (1.0 + 1e-12));
    CHECK(g.dt_fast * static_cast<double>(g.n_fast) ==
          doctest::Approx(g.fast_horizon()));
    CHECK(g.dT == doctest::Approx(1.0 / 1024.0));
    // mild eps: min_fast floor keeps the grid resolved
    const GridSpec h = choose_grids(1.0, 0.9, 64, 0.01, 4096);
    CHECK(h.n_fast >= 4096);
    CHECK(h.n_fast % 64 == 0);
    CHECK_THROWS_AS(choose_grids(0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(choose_grids(1.0, 0.0), std::domain_error);
}

TEST_CASE("noise-free near-linear run follows the semigroup") {
    // tiny amplitude: the cubic contributes O(|u0|^3) and the run is the
    // semigroup to near machine precision
    const SpectralSystem sys(Preset::LaplacianPeriodic, 8, 0.0);
    const GridSpec grid = choose_grids(1.0, 0.5, 64, 0.01);
    const QFbmField noise =
        zero_noise(HurstParam(0.5), 4, grid.n_fast, grid.dt_fast, 1);

    Field u0(8);
    u0.at(2) = 5e-7;
    u0.at(-2) = 5e-7;
    const SpdeRun run = solve_spde(sys, noise, grid, u0, grid.fast_per_slow);
    REQUIRE(!run.blew_up);
    for (std::size_t i = 0; i < run.snapshot_idx.size(); i += 7) {
        const double t = grid.dt_fast * static_cast<double>(run.snapshot_idx[i]);
        CHECK(norm(run.trajectory[i] - sys.semigroup(u0, t)) < 1e-15);
    }
}

TEST_CASE("kernel dynamics match the reduced ODE") {
    // u0 constant, Laplacian: the zero mode obeys x' = eps^2 x - x^3 and the
    // stable modes stay off. Oracle: RK4 at the same resolution.
    const SpectralSystem sys(Preset::LaplacianPeriodic, 8, 1.0);
    const double eps = 0.1;
    const GridSpec grid = choose_grids(1.0, eps, 1024, 1e-3);
    const QFbmField noise =
        zero_noise(HurstParam(0.5), 4, grid.n_fast, grid.dt_fast, 2);

    Field u0(8);
    u0.at(0) = 0.05;
    const SpdeRun run = solve_spde(sys, noise, grid, u0, grid.fast_per_slow);
    REQUIRE(!run.blew_up);

    auto f = [&](double x) { return eps * eps * x - x * x * x; };
    double x = 0.05;
    std::size_t at = 0, snap = 0;
    double max_err = 0.0;
    for (std::size_t m = 0; m <= grid.n_fast; ++m) {
        if (snap < run.snapshot_idx.size() && run.snapshot_idx[snap] == m) {
            max_err = std::max(max_err,
                               std::abs(run.trajectory[snap].at(0).real() - x));
            for (int k = 1; k <= 8; ++k)
                CHECK(std::abs(run.trajectory[snap].at(k)) < 1e-14);
            ++snap;
        }
        if (m == grid.n_fast) break;
        const double h = grid.dt_fast;
        const double k1 = f(x), k2 = f(x + 0.5 * h * k1),
                     k3 = f(x + 0.5 * h * k2), k4 = f(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        (void)at;
    }
    CHECK(snap == run.snapshot_idx.size());
    CHECK(max_err < 1e-6);
}

TEST_CASE("solver determinism and fingerprint coupling") {
    const SpectralSystem sys(Preset::LaplacianPeriodic, 8, 1.0);
    Field u0(8);
    u0.at(0) = 0.02;
    const SpdeRun a = solve_spde(sys, HurstParam(0.5), 0.3, 1.0, u0, 99, 0, 8);
    const SpdeRun b = solve_spde(sys, HurstParam(0.5), 0.3, 1.0, u0, 99, 0, 8);
    REQUIRE(a.trajectory.size() == b.trajectory.size());
    CHECK(a.noise_fingerprint == b.noise_fingerprint);
    for (std::size_t i = 0; i < a.trajectory.size(); ++i)
        CHECK(a.trajectory[i].coeffs == b.trajectory[i].coeffs);  // bit-exact
    const SpdeRun c = solve_spde(sys, HurstParam(0.5), 0.3, 1.0, u0, 98, 0, 8);
    CHECK(a.noise_fingerprint != c.noise_fingerprint);
}

TEST_CASE("convolution kernel component telescopes to the raw path") {
    // e^{dt L} is the identity on the kernel, so W_L there is exactly P_c W
    const SpectralSystem sys(Preset::LaplacianPeriodic, 6, 1.0);
    const QFbmField noise = generate_qfbm(HurstParam(0.7), 8,
                                          Spectrum::power_law(2.0), 512,
                                          0.01, 31);
    NoiseIncrements w(sys, noise);
    std::vector<std::size_t> at = {0, 1, 100, 256, 512};
    const auto conv = stochastic_convolution(sys, noise, at);
    for (std::size_t i = 0; i < at.size(); ++i) {
        const Field pw = sys.project_c(w.value(at[i]));
        CHECK(norm(sys.project_c(conv[i]) - pw) < 1e-12 * (1.0 + norm(pw)));
    }
    // zero noise gives an identically zero convolution
    const QFbmField z = zero_noise(HurstParam(0.7), 4, 64, 0.01, 1);
    for (const Field& f : stochastic_convolution(sys, z, {0, 32, 64}))
        CHECK(norm(f) == 0.0);
    CHECK_THROWS_AS(stochastic_convolution(sys, z, {65}), std::domain_error);
}

TEST_CASE("stochastic convolution reaches the OU stationary variance") {
    // single stable mode lambda = -1 driven at weight q = 1:
    // Var <W_L(t), e_1> -> q/(2|lambda|) = 1/2
    const SpectralSystem sys(Preset::LaplacianPeriodic, 4, 1.0);
    const Field e1 = sys.noise_basis(1);
    const std::size_t reps = 800, n = 1000;
    const double dt = 0.01;
    std::vector<double> samples;
    samples.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const QFbmField noise =
            generate_qfbm(HurstParam(0.5), 2,
                          Spectrum::explicit_list({0.0, 1.0}), n, dt,
                          hash64(500, r));
        double c = 0.0;
        stochastic_convolution_scan(sys, noise,
                                    [&](std::size_t m, const Field& wl) {
                                        if (m == n) c = inner(wl, e1);
                                    });
        samples.push_back(c);
    }
    double var = 0.0;
    for (double s : samples) var += s * s;
    var /= static_cast<double>(reps);
    const double se = 0.5 * std::sqrt(2.0 / static_cast<double>(reps));
    CHECK(std::abs(var - 0.5) < 3.0 * se + 0.01);
}

TEST_CASE("blow-up guard halts and records the hitting time") {
    const SpectralSystem sys(Preset::LaplacianPeriodic, 6, 1.0);
    const GridSpec grid = choose_grids(1.0, 0.5, 64, 0.01);
    const QFbmField noise =
        zero_noise(HurstParam(0.5), 2, grid.n_fast, grid.dt_fast, 3);
    Field u0(6);
    u0.at(0) = 1e3;  // dt * u^3 overshoot diverges immediately
    const SpdeRun run = solve_spde(sys, noise, grid, u0, 1);
    CHECK(run.blew_up);
    CHECK(run.blowup_time > 0.0);
    CHECK(run.blowup_time <= grid.fast_horizon());
    CHECK(run.trajectory.size() < grid.n_fast + 1);
}

TEST_CASE("self-convergence on one frozen noise path") {
    // halving the step on the same realization must shrink the endpoint
    // difference roughly first order
    const SpectralSystem sys(Preset::LaplacianPeriodic, 8, 1.0);
    const double eps = 0.5, T0 = 1.0, Tf = T0 / (eps * eps);
    const std::size_t n_fine = 4096;
    const QFbmField fine = generate_qfbm(HurstParam(0.5), 8,
                                         Spectrum::power_law(2.0), n_fine,
                                         Tf / static_cast<double>(n_fine), 17);
    Field u0(8);
    u0.at(0) = 0.1;
    u0.at(1) = 0.05;
    u0.at(-1) = 0.05;

    auto run_at = [&](const QFbmField& noise) {
        GridSpec g;
        g.T0 = T0;
        g.eps = eps;
        g.n_slow = 64;
        g.n_fast = noise.steps();
        g.fast_per_slow = g.n_fast / g.n_slow;
        g.dt_fast = noise.dt;
        g.dT = T0 / 64.0;
        const SpdeRun r = solve_spde(sys, noise, g, u0, g.n_fast);
        return r.trajectory.back();
    };

    const Field ref = run_at(fine);
    const double e2 = norm(run_at(subsample_noise(fine, 2)) - ref);
    const double e4 = norm(run_at(subsample_noise(fine, 4)) - ref);
    CHECK(e4 > e2);
    CHECK(e2 < 0.05 * (1.0 + norm(ref)));
    CHECK(e4 / e2 > 1.4);  // consistent with first-order convergence
}
