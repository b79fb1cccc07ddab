#include "ampeq/holder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ampeq/spde.hpp"

namespace ampeq {

namespace {

constexpr std::size_t kAllPairsLimit = 1u << 11;

// Walk either all pairs or dyadic gaps and fold the quotient
// |f_j - f_i| / (gap*dt)^alpha through `accept`.
template <typename Diff>
double seminorm_impl(std::size_t n, double dt, double alpha, Diff diff) {
    if (n < 2) return 0.0;
    double best = 0.0;
    auto visit_gap = [&](std::size_t g) {
        const double denom = std::pow(dt * static_cast<double>(g), alpha);
        for (std::size_t i = 0; i + g < n; ++i)
            best = std::max(best, diff(i, i + g) / denom);
    };
    if (n <= kAllPairsLimit) {
        for (std::size_t g = 1; g < n; ++g) visit_gap(g);
    } else {
        for (std::size_t g = 1; g < n; g *= 2) visit_gap(g);
    }
    return best;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RatioReport ratio_report(double exponent, double alpha,
                         const SampledFunction& f,
                         const std::vector<double>& eps_grid, double lambda) {
    if (!(lambda < 0.0))
        throw std::domain_error("convolution check needs a stable mode lambda < 0");
    if (eps_grid.empty())
        throw std::domain_error("convolution check needs a nonempty eps grid");
    RatioReport rep;
    rep.exponent = exponent;
    rep.eps_grid = eps_grid;
    for (double eps : eps_grid) {
        const SampledFunction g = epsilon_convolution(f, lambda, eps);
        const double hn = holder_norm(g, alpha);
        rep.norms.push_back(hn);
        rep.ratios.push_back(hn / std::pow(eps, exponent));
    }
    const double med = median_of(rep.ratios);
    const double mx = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    rep.max_over_median = mx / med;
    rep.fitted_slope = loglog_slope(rep.eps_grid, rep.norms);
    rep.pass = rep.max_over_median <= 2.5;
    return rep;
}

}  // namespace

double holder_seminorm(const SampledFunction& f, double alpha) {
    return seminorm_impl(f.values.size(), f.dt, alpha,
                         [&](std::size_t i, std::size_t j) {
                             return std::abs(f.values[j] - f.values[i]);
                         });
}

double holder_norm(const SampledFunction& f, double alpha) {
    double sup = 0.0;
    for (double v : f.values) sup = std::max(sup, std::abs(v));
    return sup + holder_seminorm(f, alpha);
}

double holder_norm(const std::vector<Field>& f, double dt, double alpha) {
    double sup = 0.0;
    for (const Field& v : f) sup = std::max(sup, norm(v));
    return sup + seminorm_impl(f.size(), dt, alpha,
                               [&](std::size_t i, std::size_t j) {
                                   return norm(f[j] - f[i]);
                               });
}

SampledFunction epsilon_convolution(const SampledFunction& f, double lambda,
                                    double eps) {
    if (f.values.size() < 2)
        throw std::domain_error("epsilon_convolution: need at least two samples");
    // The kernel decays on the scale eps^2/|lambda|; substep (with linear
    // interpolation of f) until the step resolves it, otherwise both the
    // quadrature and the discrete Holder norm miss the boundary layer.
    const double stiffness = f.dt * std::abs(lambda) / (eps * eps);
    const std::size_t sub = std::min<std::size_t>(
        512, static_cast<std::size_t>(std::ceil(stiffness / 0.5)) + 1);
    const double dt = f.dt / static_cast<double>(sub);
    const double e_full = std::exp(dt * lambda / (eps * eps));
    const double e_half = std::exp(0.5 * dt * lambda / (eps * eps));

    SampledFunction g;
    g.dt = dt;
    g.values.resize((f.values.size() - 1) * sub + 1, 0.0);
    std::size_t out = 0;
    for (std::size_t m = 0; m + 1 < f.values.size(); ++m) {
        const double f0 = f.values[m];
        const double df = f.values[m + 1] - f0;
        for (std::size_t s = 0; s < sub; ++s) {
            const double f_mid =
                f0 + df * (static_cast<double>(s) + 0.5) /
                         static_cast<double>(sub);
            g.values[out + 1] = e_full * g.values[out] + dt * e_half * f_mid;
            ++out;
        }
    }
    return g;
}

RatioReport check_lemma_A1(double alpha, const SampledFunction& f,
                           const std::vector<double>& eps_grid, double lambda) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("check_lemma_A1: alpha must lie in (0,1)");
    return ratio_report(2.0 - 2.0 * alpha, alpha, f, eps_grid, lambda);
}

RatioReport check_lemma_A2(double alpha, const SampledFunction& f,
                           const std::vector<double>& eps_grid, double lambda) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("check_lemma_A2: alpha must lie in (0,1)");
    if (std::abs(f.values.front()) > 1e-12)
        throw std::domain_error("check_lemma_A2: requires f(0) = 0");
    return ratio_report(2.0, alpha, f, eps_grid, lambda);
}

RatioReport check_lemma_A3(double alpha, double gamma, double zeta,
                           const SampledFunction& f,
                           const std::vector<double>& eps_grid, double lambda) {
    if (!(gamma > 0.0 && gamma <= alpha && alpha < 1.0))
        throw std::domain_error("check_lemma_A3: need 0 < gamma <= alpha < 1");
    const double zeta_max = 2.0 * (1.0 - alpha) / (1.0 - gamma);
    if (zeta <= 0.0) zeta = 0.9 * zeta_max;
    if (!(zeta < zeta_max))
        throw std::domain_error(
            "check_lemma_A3: need zeta < 2(1-alpha)/(1-gamma)");
    return ratio_report(zeta, alpha, f, eps_grid, lambda);
}

SampledFunction profile_continuous(std::size_t n) {
    SampledFunction f;
    f.dt = 1.0 / static_cast<double>(n - 1);
    f.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        f.values[i] = std::cos(2.0 * M_PI * f.dt * static_cast<double>(i));
    return f;
}

SampledFunction profile_smooth_zero(std::size_t n) {
    SampledFunction f;
    f.dt = 1.0 / static_cast<double>(n - 1);
    f.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        f.values[i] = std::sin(M_PI * f.dt * static_cast<double>(i));
    return f;
}

SampledFunction profile_weierstrass(std::size_t n, double gamma) {
    // W(t) = sum_j 2^{-gamma j} (cos(2^j pi t + phi_j) - cos phi_j):
    // C^gamma and nothing better, vanishing at t = 0. Golden-ratio
    // phases keep the roughness spatially uniform instead of piling the
    // level extrema onto t = 0. Truncated once the wavelength drops
    // below the grid.
    SampledFunction f;
    f.dt = 1.0 / static_cast<double>(n - 1);
    f.values.assign(n, 0.0);
    const int levels =
        static_cast<int>(std::ceil(std::log2(static_cast<double>(n))));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = f.dt * static_cast<double>(i);
        double s = 0.0;
        for (int j = 0; j <= levels; ++j) {
            const double phi = 2.0 * M_PI * 0.61803398874989485 * j;
            s += std::pow(2.0, -gamma * j) *
                 (std::cos(std::pow(2.0, j) * M_PI * t + phi) -
                  std::cos(phi));
        }
        f.values[i] = s;
    }
    return f;
}

double identity_l46_deviation(const SpectralSystem& sys,
                              const QFbmField& noise, double eps) {
    // Slow node tau_i maps to fast node i: tau_i * eps^-2 = i * dt_fast.
    const double dt_f = noise.dt;
    const double dt_s = dt_f * eps * eps;
    NoiseIncrements w(sys, noise);

    Field lhs(sys.modes()), rhs(sys.modes());
    Field ps_wl_prev(sys.modes());
    Field f_prev = sys.project_s(w.value(0));
    double max_dev = 0.0, max_lhs = 0.0;

    stochastic_convolution_scan(sys, noise, [&](std::size_t m, const Field& wl) {
        const Field ps_wl = sys.project_s(wl);
        if (m > 0) {
            Field trap = ps_wl_prev + ps_wl;
            trap *= 0.5 * dt_s;
            lhs += trap;

            const Field f_cur = sys.project_s(w.value(m));
            Field mid = f_prev + f_cur;
            mid *= 0.5 * dt_s;
            rhs = sys.semigroup(rhs, dt_f) + sys.semigroup(mid, 0.5 * dt_f);
            f_prev = f_cur;

            max_dev = std::max(max_dev, norm(lhs - rhs));
            max_lhs = std::max(max_lhs, norm(lhs));
        }
        ps_wl_prev = ps_wl;
    });
    return max_lhs > 0.0 ? max_dev / max_lhs : max_dev;
}

QFbmField subsample_noise(const QFbmField& noise, std::size_t factor) {
    if (factor == 0 || noise.steps() % factor != 0)
        throw std::domain_error("subsample_noise: factor must divide the grid");
    QFbmField out = noise;
    out.dt = noise.dt * static_cast<double>(factor);
    for (FbmPath& p : out.component_paths) {
        std::vector<double> keep;
        keep.reserve(p.steps() / factor + 1);
        for (std::size_t i = 0; i < p.values.size(); i += factor)
            keep.push_back(p.values[i]);
        p.values = std::move(keep);
        p.dt = out.dt;
    }
    return out;
}

YoungCheck young_bound_check(const SpectralSystem& sys,
                             const std::vector<Field>& a_slow,
                             const QFbmField& noise, double eps,
                             double alpha_p, double beta_p) {
    if (!(alpha_p + beta_p > 1.0))
        throw std::domain_error("young_bound_check: need alpha' + beta' > 1");
    if (a_slow.size() < 2)
        throw std::domain_error("young_bound_check: empty amplitude path");
    const std::size_t n_slow = a_slow.size() - 1;
    if (noise.steps() % n_slow != 0)
        throw std::domain_error("young_bound_check: grids do not align");
    const std::size_t mult = noise.steps() / n_slow;
    const double dT = noise.dt * eps * eps * static_cast<double>(mult);

    std::vector<std::size_t> at(n_slow + 1);
    for (std::size_t j = 0; j <= n_slow; ++j) at[j] = j * mult;
    const std::vector<Field> wl = stochastic_convolution(sys, noise, at);

    // Z(T_j) = int_0^{T_j} P_s W_L(s eps^-2) ds, trapezoid on the slow grid
    std::vector<Field> z;
    z.reserve(n_slow + 1);
    z.push_back(Field(sys.modes()));
    for (std::size_t j = 0; j < n_slow; ++j) {
        Field trap = sys.project_s(wl[j]) + sys.project_s(wl[j + 1]);
        trap *= 0.5 * dT;
        z.push_back(z.back() + trap);
    }

    // left Riemann-Stieltjes sum of F_c(a, a, dZ)
    Field acc(sys.modes());
    for (std::size_t j = 0; j < n_slow; ++j)
        acc += sys.project_c(sys.apply_F(a_slow[j], a_slow[j], z[j + 1] - z[j]));

    YoungCheck out;
    out.lhs = norm(acc);
    const double na = holder_norm(a_slow, dT, beta_p);
    out.rhs_a = na * na;
    out.rhs_z = holder_norm(z, dT, alpha_p);
    out.ratio = out.lhs / (out.rhs_a * out.rhs_z);
    return out;
}

}  // namespace ampeq
