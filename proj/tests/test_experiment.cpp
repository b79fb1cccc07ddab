#include <doctest.h>

#include <cmath>
#include <vector>

#include "ampeq/experiment.hpp"
#include "ampeq/rng.hpp"

using namespace ampeq;

TEST_CASE("gamma exponent") {
    CHECK(gamma_exponent(HurstParam(0.5)).gamma == doctest::Approx(3.0));
    CHECK(gamma_exponent(HurstParam(0.75)).gamma == doctest::Approx(3.0));
    CHECK(gamma_exponent(HurstParam(0.25)).gamma ==
          doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    // long-form identity (1+H)/(1-H) = 1 + 2H + 2H^2/(1-H)
    for (double h : {0.1, 0.3, 0.45}) {
        const double lhs = gamma_exponent(HurstParam(h)).gamma;
        const double rhs = 1.0 + 2.0 * h + 2.0 * h * h / (1.0 - h);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
        CHECK(lhs < 3.0);  // strictly below the smooth-regime order
        CHECK(lhs > 1.0 + 2.0 * h);
    }
    // continuity at H = 1/2
    CHECK(gamma_exponent(HurstParam(0.4999999)).gamma ==
          doctest::Approx(3.0).epsilon(1e-5));
}

TEST_CASE("residual_s vanishes for psi == 0 and matches a constant-mode form") {
    const SpectralSystem sys(Preset::LaplacianPeriodic, 8, 1.0);
    const std::vector<Field> zero(65, Field(8));
    for (double r : residual_s(sys, zero, 0.1, 0.01)) CHECK(r == 0.0);

    // psi held constant at a single stable mode: the integrand g is
    // time-independent and the filtered integral has the closed form
    // sum_k g_k (1 - e^{lambda_k t}) / |lambda_k|
    const double eps = 0.2, dt = 2e-4;
    Field psi0(8);
    psi0.at(2) = 0.3;
    psi0.at(-2) = 0.3;
    const std::size_t n = 5000;  // horizon 1
    const std::vector<Field> psi(n + 1, psi0);
    const auto res = residual_s(sys, psi, eps, dt);
    REQUIRE(res.size() == n + 1);
    CHECK(res[0] == 0.0);

    Field g = sys.project_s(eps * eps * sys.apply_A(psi0) + sys.apply_F(psi0));
    for (std::size_t i : {500ul, 2500ul, 5000ul}) {
        const double t = dt * static_cast<double>(i);
        Field exact(8);
        for (int k = -8; k <= 8; ++k) {
            const double lam = sys.eigenvalue(k);
            if (lam < 0.0)
                exact.at(k) = g.at(k) * ((1.0 - std::exp(lam * t)) / (-lam));
        }
        CHECK(std::abs(res[i] - norm(exact)) < 1e-6);
    }
}

TEST_CASE("residual_c expansion equals the direct form") {
    const SpectralSystem sys(Preset::LaplacianPeriodic, 16, 1.0);
    const HurstParam h(0.5);
    Field u0(16);
    u0.at(0) = 0.05;
    u0.at(3) = 0.01;
    u0.at(-3) = 0.01;
    ReplicaOptions opt;
    opt.n_slow = 64;
    opt.noise_modes = 8;
    const ReplicaRun rr = run_replica(sys, h, 0.2, u0, 42, opt);
    REQUIRE(!rr.blew_up);

    std::vector<Field> psi_s;
    psi_s.reserve(rr.fou.values.size());
    for (const Field& f : rr.fou.values) psi_s.push_back(sys.project_s(f));
    const ResidualCReport rep =
        residual_c(sys, rr.a.values, psi_s, 0.2, 0.5, rr.grid.dT);
    REQUIRE(rep.total.size() == rr.a.values.size());
    CHECK(rep.total[0] == 0.0);
    // the cubic is exactly trilinear, so the four-term expansion must agree
    // with the unexpanded integrand to roundoff-dominated accuracy
    CHECK(rep.expansion_dev < 1e-8);
    // the kernel has no linear term under A = nu*Id for the laplacian preset
    for (double v : rep.term_a) CHECK(v == 0.0);
    CHECK(rep.total.back() > 0.0);

    // degenerate input: psi_s == 0 kills every term
    const std::vector<Field> zs(rr.a.values.size(), Field(16));
    const ResidualCReport z =
        residual_c(sys, rr.a.values, zs, 0.2, 0.5, rr.grid.dT);
    for (double v : z.total) CHECK(v == 0.0);
    CHECK_THROWS_AS(residual_c(sys, rr.a.values, {}, 0.2, 0.5, 0.01),
                    std::domain_error);
}

TEST_CASE("pathwise error and replica coupling") {
    const SpectralSystem sys(Preset::LaplacianPeriodic, 16, 1.0);
    Field u0(16);
    u0.at(0) = 0.05;
    ReplicaOptions opt;
    opt.n_slow = 128;
    opt.noise_modes = 8;
    const ReplicaRun rr = run_replica(sys, HurstParam(0.5), 0.1, u0, 7, opt);
    REQUIRE(!rr.blew_up);
    // psi == u gives a zero error
    CHECK(pathwise_error(rr.run, rr.run.trajectory) == 0.0);
    CHECK_THROWS_AS(pathwise_error(rr.run, {}), std::domain_error);
    // both approximations track the run; the full psi is strictly better
    CHECK(rr.err_full > 0.0);
    CHECK(rr.err_full < rr.err_first);
    // orders: err_first ~ eps^2, err_full ~ eps^3 at H = 1/2
    CHECK(rr.err_first < 0.1);
    CHECK(rr.err_full < 0.01);
    // determinism and noise sharing
    const ReplicaRun rr2 = run_replica(sys, HurstParam(0.5), 0.1, u0, 7, opt);
    CHECK(rr2.noise_fingerprint == rr.noise_fingerprint);
    CHECK(rr2.err_full == rr.err_full);
    CHECK(rr.run.noise_fingerprint == rr.noise_fingerprint);
}

TEST_CASE("scaling study on a coarse budget") {
    ScalingConfig cfg;
    cfg.eps_grid = {0.4, 0.2};
    cfg.replicas = 4;
    cfg.n_slow = 256;
    cfg.modes = 16;
    cfg.noise_modes = 8;
    cfg.seed_base = 5;
    const ScalingReport rep = scaling_study(cfg);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].eps == 0.4);
    CHECK(rep.rows[0].replicas == 4);
    CHECK(rep.rows[0].excluded == 0);
    CHECK(rep.rows[1].median < rep.rows[0].median);  // error shrinks with eps
    CHECK(rep.gamma_theory == doctest::Approx(3.0));
    CHECK(!rep.invalid);
    // determinism
    const ScalingReport rep2 = scaling_study(cfg);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(rep2.rows[i].median == rep.rows[i].median);
        CHECK(rep2.rows[i].q90 == rep.rows[i].q90);
    }
    CHECK(rep2.slope == rep.slope);

    ScalingConfig bad = cfg;
    bad.eps_grid = {0.2, 0.4};
    CHECK_THROWS_AS(scaling_study(bad), std::domain_error);
    bad.eps_grid = {};
    CHECK_THROWS_AS(scaling_study(bad), std::domain_error);
}

TEST_CASE("omega conditions on silent noise") {
    const SpectralSystem sys(Preset::LaplacianPeriodic, 8, 1.0);
    const GridSpec grid = choose_grids(1.0, 0.2, 64, 0.01);
    const QFbmField z = generate_qfbm(
        HurstParam(0.5), 4, Spectrum::explicit_list({0.0, 0.0, 0.0, 0.0}),
        grid.n_fast, grid.dt_fast, 1);
    const OmegaConditions c =
        omega_conditions(sys, z, 0.2, 0.05, Field(8), 64);
    CHECK(c.conv_bound);
    CHECK(c.holder_bound);
    CHECK(c.psi_s0_bound);
    CHECK(c.psi_c0_bound);
    CHECK(c.all());
    CHECK(c.sup_conv == 0.0);
    CHECK(c.holder_w == 0.0);
    CHECK(c.beta == doctest::Approx(0.45));  // H - kappa at H = 1/2
    // oversized initial data violates the eps^-kappa bound
    Field big(8);
    big.at(2) = 100.0;
    big.at(-2) = 100.0;
    const OmegaConditions v = omega_conditions(sys, z, 0.2, 0.05, big, 64);
    CHECK(!v.psi_s0_bound);
    CHECK(!v.all());
    // beta switches branch above H = 1/2
    const QFbmField z7 = generate_qfbm(
        HurstParam(0.7), 4, Spectrum::explicit_list({0.0, 0.0, 0.0, 0.0}),
        grid.n_fast, grid.dt_fast, 1);
    CHECK(omega_conditions(sys, z7, 0.2, 0.05, Field(8), 64).beta ==
          doctest::Approx(0.6));  // (1/2 + H)/2
}

TEST_CASE("omega event monitor counts") {
    const SpectralSystem sys(Preset::LaplacianPeriodic, 8, 1.0);
    ReplicaOptions opt;
    opt.n_slow = 64;
    opt.noise_modes = 8;
    const OmegaReport rep =
        omega_event_monitor(sys, HurstParam(0.5), 0.2, 0.05, 20, 3, opt);
    CHECK(rep.replicas == 20);
    CHECK(rep.count_all <= rep.count_conv);
    CHECK(rep.count_all <= rep.count_holder);
    CHECK(rep.frequency == doctest::Approx(
                               static_cast<double>(rep.count_all) / 20.0));
    // zero initial data always satisfies the last two conditions
    CHECK(rep.count_psi_s0 == 20);
    CHECK(rep.count_psi_c0 == 20);
}

TEST_CASE("convolution moment check") {
    CHECK_THROWS_AS(
        convolution_moment_check(HurstParam(0.5), {-1.0}, 0.6, 10, 1),
        std::domain_error);
    CHECK_THROWS_AS(convolution_moment_check(HurstParam(0.5), {}, 0.2, 10, 1),
                    std::domain_error);
    const MomentReport rep =
        convolution_moment_check(HurstParam(0.75), {-1.0, -4.0}, 0.2, 400, 11);
    REQUIRE(rep.rows.size() == 2);
    for (const MomentRow& r : rep.rows) {
        REQUIRE(r.t_grid.size() == r.second_moment.size());
        for (double m : r.second_moment) {
            CHECK(std::isfinite(m));
            CHECK(m > 0.0);
        }
        CHECK(r.plateau_ratio >= 1.0);
    }
    // a more negative lambda damps the convolution harder
    CHECK(rep.rows[1].second_moment.back() < rep.rows[0].second_moment.back());
    // determinism
    const MomentReport rep2 =
        convolution_moment_check(HurstParam(0.75), {-1.0, -4.0}, 0.2, 400, 11);
    CHECK(rep2.rows[0].second_moment == rep.rows[0].second_moment);
}
