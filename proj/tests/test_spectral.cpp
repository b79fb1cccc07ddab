#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <vector>

#include "ampeq/rng.hpp"
#include "ampeq/spectral.hpp"

using namespace ampeq;

namespace {

constexpr double kPi = 3.14159265358979323846;

Field random_field(int N, std::uint64_t seed) {
    GaussStream g(seed);
    Field f(N);
    f.at(0) = g();
    for (int k = 1; k <= N; ++k) {
        f.at(k) = std::complex<double>(g(), g());
        f.at(-k) = std::conj(f.at(k));
    }
    return f;
}

// brute-force trilinear convolution -(u v w), truncated to |k| <= N
Field direct_F(const Field& u, const Field& v, const Field& w) {
    const int N = u.nmodes;
    Field out(N);
    for (int i = -N; i <= N; ++i)
        for (int j = -N; j <= N; ++j)
            for (int l = -N; l <= N; ++l) {
                const int k = i + j + l;
                if (k < -N || k > N) continue;
                out.at(k) -= u.at(i) * v.at(j) * w.at(l);
            }
    return out;
}

}  // namespace

TEST_CASE("eigenvalues and spectral gap") {
    const SpectralSystem lap(Preset::LaplacianPeriodic, 8, 1.0);
    CHECK(lap.eigenvalue(0) == 0.0);
    CHECK(lap.eigenvalue(3) == doctest::Approx(-9.0));
    CHECK(lap.eigenvalue(-3) == doctest::Approx(-9.0));
    CHECK(lap.kernel_dim() == 1);
    CHECK(lap.mu() == doctest::Approx(1.0));

    const SpectralSystem sh(Preset::SwiftHohenberg, 8, 1.0);
    CHECK(sh.eigenvalue(1) == 0.0);
    CHECK(sh.eigenvalue(-1) == 0.0);
    CHECK(sh.eigenvalue(0) == doctest::Approx(-1.0));
    CHECK(sh.eigenvalue(2) == doctest::Approx(-9.0));
    CHECK(sh.kernel_dim() == 2);
    CHECK(sh.mu() == doctest::Approx(1.0));

    CHECK_THROWS_AS(SpectralSystem(Preset::LaplacianPeriodic, 1, 1.0),
                    std::domain_error);
}

TEST_CASE("projections split the space") {
    for (Preset p : {Preset::LaplacianPeriodic, Preset::SwiftHohenberg}) {
        const SpectralSystem sys(p, 12, 1.0);
        const Field f = random_field(12, 3);
        const Field fc = sys.project_c(f), fs = sys.project_s(f);
        CHECK(norm(fc + fs - f) < 1e-13 * norm(f));          // complementary
        CHECK(std::abs(inner(fc, fs)) < 1e-12 * norm(f) * norm(f));  // orthogonal
        CHECK(norm(sys.project_c(fc) - fc) < 1e-14);          // idempotent
        CHECK(norm(sys.project_s(fs) - fs) < 1e-14);
        CHECK(norm(sys.project_c(fs)) == 0.0);
        // Pythagoras in the X-norm
        CHECK(norm(fc) * norm(fc) + norm(fs) * norm(fs) ==
              doctest::Approx(norm(f) * norm(f)).epsilon(1e-12));
    }
}

TEST_CASE("X-norm and inner product conventions") {
    // constant function c has coeff c at mode 0: ||c||_{L2[0,2pi]} = |c| sqrt(2pi)
    Field c(4);
    c.at(0) = 1.5;
    CHECK(norm(c) == doctest::Approx(1.5 * std::sqrt(2.0 * kPi)));
    // cos(x): coeffs 1/2 at +-1, ||cos||^2 = pi
    Field cosx(4);
    cosx.at(1) = 0.5;
    cosx.at(-1) = 0.5;
    CHECK(inner(cosx, cosx) == doctest::Approx(kPi));
    CHECK(norm(cosx) == doctest::Approx(std::sqrt(kPi)));
    CHECK(hermitian_symmetric(cosx));
    Field bad(4);
    bad.at(1) = std::complex<double>(0.0, 1.0);
    CHECK(!hermitian_symmetric(bad));
}

TEST_CASE("semigroup identities and decay") {
    const SpectralSystem sys(Preset::SwiftHohenberg, 10, 0.7);
    const Field f = random_field(10, 4);
    CHECK(norm(sys.semigroup(f, 0.0) - f) == 0.0);
    // additivity e^{(t+s)L} = e^{tL} e^{sL}
    const Field ab = sys.semigroup(sys.semigroup(f, 0.4), 0.6);
    CHECK(norm(ab - sys.semigroup(f, 1.0)) < 1e-13 * norm(f));
    // kernel is fixed pointwise
    CHECK(norm(sys.project_c(sys.semigroup(f, 2.0)) - sys.project_c(f)) < 1e-14);
    // uniform decay on the stable part
    const Field fs = sys.project_s(f);
    for (double t : {0.1, 1.0, 3.0})
        CHECK(norm(sys.semigroup(fs, t)) <=
              std::exp(-sys.mu() * t) * norm(fs) * (1.0 + 1e-13));
    CHECK_THROWS_AS(sys.semigroup(f, -0.1), std::domain_error);
}

TEST_CASE("apply_A") {
    SpectralSystem sys(Preset::LaplacianPeriodic, 6, 2.5);
    const Field f = random_field(6, 5);
    CHECK(norm(sys.apply_A(f) - 2.5 * f) < 1e-13);
    // general diagonal multiplier
    std::vector<double> diag(13, 1.0);
    diag[6 + 2] = -3.0;
    diag[6 - 2] = -3.0;
    sys.set_diagonal_A(diag);
    Field g(6);
    g.at(2) = 1.0;
    g.at(-2) = 1.0;
    CHECK(norm(sys.apply_A(g) + 3.0 * g) < 1e-14);
    CHECK_THROWS_AS(sys.set_diagonal_A({1.0, 2.0}), std::domain_error);
}

TEST_CASE("frac power norm") {
    const SpectralSystem sys(Preset::LaplacianPeriodic, 6, 1.0);
    const Field f = random_field(6, 6);
    CHECK(sys.frac_power_norm(f, 0.0) == doctest::Approx(norm(f)));
    // single mode k=2: weight (1+4)^alpha
    Field g(6);
    g.at(2) = 0.5;
    g.at(-2) = 0.5;
    CHECK(sys.frac_power_norm(g, 0.5) ==
          doctest::Approx(std::sqrt(5.0) * norm(g)));
    CHECK(sys.frac_power_norm(f, 0.5) >= norm(f));
    CHECK_THROWS_AS(sys.frac_power_norm(f, 1.0), std::domain_error);
    CHECK_THROWS_AS(sys.frac_power_norm(f, -0.1), std::domain_error);
}

TEST_CASE("cubic nonlinearity on closed-form inputs") {
    const SpectralSystem lap(Preset::LaplacianPeriodic, 8, 1.0);
    // constant c: F(c) = -c^3 (mode zero only)
    Field c(8);
    c.at(0) = 0.7;
    const Field fc = lap.apply_F(c);
    CHECK(fc.at(0).real() == doctest::Approx(-0.343).epsilon(1e-13));
    for (int k = 1; k <= 8; ++k) CHECK(std::abs(fc.at(k)) < 1e-14);
    // <F_c(c), c> = -2 pi c^4
    CHECK(inner(lap.project_c(fc), c) ==
          doctest::Approx(-2.0 * kPi * std::pow(0.7, 4)).epsilon(1e-13));

    // Swift-Hohenberg on cos: -cos^3 = -(3/4)cos - (1/4)cos(3x)
    const SpectralSystem sh(Preset::SwiftHohenberg, 8, 1.0);
    Field cosx(8);
    cosx.at(1) = 0.5;
    cosx.at(-1) = 0.5;
    const Field f3 = sh.apply_F(cosx);
    const Field pc = sh.project_c(f3);
    CHECK(norm(pc + 0.75 * cosx) < 1e-13);
    CHECK(f3.at(3).real() == doctest::Approx(-0.125).epsilon(1e-12));
    CHECK(inner(pc, cosx) == doctest::Approx(-0.75 * kPi).epsilon(1e-13));
}

TEST_CASE("pseudospectral F is dealiased and symmetric") {
    const SpectralSystem sys(Preset::LaplacianPeriodic, 5, 1.0);
    const Field u = random_field(5, 10), v = random_field(5, 11),
                w = random_field(5, 12);
    const Field fast = sys.apply_F(u, v, w);
    const Field slow = direct_F(u, v, w);
    double scale = norm(slow) + 1.0;
    CHECK(norm(fast - slow) < 1e-12 * scale);  // exact up to roundoff
    // symmetry in the arguments
    CHECK(norm(sys.apply_F(v, u, w) - fast) < 1e-12 * scale);
    CHECK(norm(sys.apply_F(w, v, u) - fast) < 1e-12 * scale);
    // real inputs give real (Hermitian) outputs
    CHECK(hermitian_symmetric(fast, 1e-12));
}

TEST_CASE("noise basis is orthonormal and L-diagonal") {
    const SpectralSystem sys(Preset::SwiftHohenberg, 6, 1.0);
    for (std::size_t i = 0; i < 9; ++i) {
        for (std::size_t j = 0; j < 9; ++j) {
            const double ip = inner(sys.noise_basis(i), sys.noise_basis(j));
            CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
    }
    // basis index 0 is constant; pair (2k-1, 2k) carries wavenumber k
    CHECK(sys.eigenvalue_of_noise_basis(0) == sys.eigenvalue(0));
    CHECK(sys.eigenvalue_of_noise_basis(1) == sys.eigenvalue(1));
    CHECK(sys.eigenvalue_of_noise_basis(2) == sys.eigenvalue(1));
    CHECK(sys.eigenvalue_of_noise_basis(3) == sys.eigenvalue(2));
    CHECK_THROWS_AS(sys.noise_basis(100), std::domain_error);
    // add_noise_basis accumulates
    Field f(6);
    sys.add_noise_basis(f, 1, 2.0);
    CHECK(norm(f - 2.0 * sys.noise_basis(1)) < 1e-14);
}

TEST_CASE("cubic sign conditions hold on the kernel") {
    for (Preset p : {Preset::LaplacianPeriodic, Preset::SwiftHohenberg}) {
        const SpectralSystem sys(p, 8, 1.0);
        const SignConditionReport rep = check_sign_conditions(sys, 1000, 2024);
        CHECK(rep.ok);
        CHECK(rep.violations_f_sign == 0);
        CHECK(rep.violations_f1 == 0);
        CHECK(rep.eta > 0.0);
        CHECK(rep.C_eta >= 0.0);
        CHECK(rep.summary().find("ok=1") != std::string::npos);
    }
    CHECK_THROWS_AS(
        check_sign_conditions(SpectralSystem(Preset::LaplacianPeriodic, 4, 1.0),
                              0, 1),
        std::domain_error);
}

TEST_CASE("field csv round-trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ampeq_test_spectral";
    fs::create_directories(dir);
    const std::string file = (dir / "f.csv").string();
    const Field f = random_field(7, 20);
    write_field_csv(f, file);
    const Field g = read_field_csv(file);
    REQUIRE(g.nmodes == 7);
    CHECK(norm(g - f) < 1e-15);
    fs::remove_all(dir);
}
