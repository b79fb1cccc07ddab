#include "ampeq/spde.hpp"

#include <cmath>
#include <stdexcept>

namespace ampeq {

GridSpec choose_grids(double T0, double eps, std::size_t n_slow, double dt_cap,
                      std::size_t min_fast) {
    if (!(T0 > 0.0) || !(eps > 0.0))
        throw std::domain_error("choose_grids: T0 and eps must be positive");
    GridSpec g;
    g.T0 = T0;
    g.eps = eps;
    g.n_slow = n_slow;
    const double Tf = T0 / (eps * eps);
    std::size_t mult = static_cast<std::size_t>(
        std::ceil(Tf / (dt_cap * static_cast<double>(n_slow))));
    mult = std::max<std::size_t>(mult, (min_fast + n_slow - 1) / n_slow);
    g.fast_per_slow = mult;
    g.n_fast = mult * n_slow;
    g.dt_fast = Tf / static_cast<double>(g.n_fast);
    g.dT = T0 / static_cast<double>(n_slow);
    return g;
}

NoiseIncrements::NoiseIncrements(const SpectralSystem& sys,
                                 const QFbmField& noise)
    : sys_(sys), noise_(noise) {}

Field NoiseIncrements::increment(std::size_t m) const {
    Field f(sys_.modes());
    for (std::size_t j = 0; j < noise_.modes(); ++j) {
        const auto& v = noise_.component_paths[j].values;
        sys_.add_noise_basis(
            f, j, std::sqrt(noise_.eigenvalues_q[j]) * (v[m + 1] - v[m]));
    }
    return f;
}

Field NoiseIncrements::value(std::size_t m) const {
    Field f(sys_.modes());
    for (std::size_t j = 0; j < noise_.modes(); ++j)
        sys_.add_noise_basis(
            f, j,
            std::sqrt(noise_.eigenvalues_q[j]) *
                noise_.component_paths[j].values[m]);
    return f;
}

namespace {

std::vector<double> semigroup_factors(const SpectralSystem& sys, double dt) {
    std::vector<double> e(2 * sys.modes() + 1);
    for (int k = -sys.modes(); k <= sys.modes(); ++k)
        e[k + sys.modes()] = std::exp(dt * sys.eigenvalue(k));
    return e;
}

void apply_diag(Field& f, const std::vector<double>& e) {
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) f.coeffs[i] *= e[i];
}

}  // namespace

SpdeRun solve_spde(const SpectralSystem& sys, const QFbmField& noise,
                   const GridSpec& grid, const Field& u0, std::size_t stride) {
    if (noise.steps() < grid.n_fast)
        throw std::domain_error("solve_spde: noise does not cover the grid");
    if (stride == 0) stride = 1;

    SpdeRun run{grid, noise.hurst, u0, stride, {}, {}, false, 0.0,
                noise.fingerprint(), noise.seed};
    const double dt = grid.dt_fast;
    const double eps2 = grid.eps * grid.eps;
    const double noise_amp =
        std::pow(grid.eps, 2.0 * noise.hurst.value() + 1.0);
    const auto efac = semigroup_factors(sys, dt);
    NoiseIncrements dW(sys, noise);

    Field u = u0;
    run.snapshot_idx.push_back(0);
    run.trajectory.push_back(u);

    for (std::size_t m = 0; m < grid.n_fast; ++m) {
        Field drift = sys.apply_A(u);
        drift *= eps2;
        drift += sys.apply_F(u);
        drift *= dt;
        u += drift;
        Field dw = dW.increment(m);
        dw *= noise_amp;
        u += dw;
        apply_diag(u, efac);

        if (norm(u) > 1e6) {
            run.blew_up = true;
            run.blowup_time = dt * static_cast<double>(m + 1);
            break;
        }
        if ((m + 1) % stride == 0 || m + 1 == grid.n_fast) {
            run.snapshot_idx.push_back(m + 1);
            run.trajectory.push_back(u);
        }
    }
    return run;
}

SpdeRun solve_spde(const SpectralSystem& sys, const HurstParam& H, double eps,
                   double T0, const Field& u0, std::uint64_t seed,
                   std::size_t stride, std::size_t noise_modes, double rho) {
    const GridSpec grid = choose_grids(T0, eps);
    const QFbmField noise = generate_qfbm(H, noise_modes,
                                          Spectrum::power_law(rho), grid.n_fast,
                                          grid.dt_fast, seed);
    if (stride == 0) stride = default_stride(grid.n_fast);
    return solve_spde(sys, noise, grid, u0, stride);
}

void stochastic_convolution_scan(
    const SpectralSystem& sys, const QFbmField& noise,
    const std::function<void(std::size_t, const Field&)>& visit) {
    const std::size_t n = noise.steps();
    const auto efac = semigroup_factors(sys, noise.dt);
    NoiseIncrements dW(sys, noise);

    Field wl(sys.modes());
    visit(0, wl);
    for (std::size_t m = 0; m < n; ++m) {
        wl += dW.increment(m);
        apply_diag(wl, efac);
        visit(m + 1, wl);
    }
}

std::vector<Field> stochastic_convolution(const SpectralSystem& sys,
                                          const QFbmField& noise,
                                          const std::vector<std::size_t>& at) {
    std::vector<Field> out;
    out.reserve(at.size());
    std::size_t next = 0;
    stochastic_convolution_scan(sys, noise,
                                [&](std::size_t m, const Field& wl) {
                                    while (next < at.size() && at[next] == m) {
                                        out.push_back(wl);
                                        ++next;
                                    }
                                });
    if (next != at.size())
        throw std::domain_error(
            "stochastic_convolution: requested index beyond noise grid");
    return out;
}

}  // namespace ampeq
