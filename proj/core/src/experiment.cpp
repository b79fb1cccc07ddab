#include "ampeq/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "ampeq/gauss_legendre.hpp"
#include "ampeq/holder.hpp"
#include "ampeq/parallel.hpp"
#include "ampeq/rng.hpp"

namespace ampeq {

namespace {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double quantile(std::vector<double> v, double p) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * v[lo] + w * v[hi];
}

struct FitResult {
    double slope = 0.0;
    double stderr_ = 0.0;
};

FitResult fit_loglog(const std::vector<double>& x,
                     const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    FitResult r;
    r.slope = sxy / sxx;
    if (n > 2) {
        const double icpt = my - r.slope * mx;
        double ss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = ly[i] - icpt - r.slope * lx[i];
            ss += e * e;
        }
        r.stderr_ = std::sqrt(ss / (static_cast<double>(n - 2) * sxx));
    }
    return r;
}

// unit-norm representative of the kernel N (cos direction for the
// two-dimensional Swift-Hohenberg kernel)
Field kernel_direction(const SpectralSystem& sys) {
    Field f(sys.modes());
    for (int k : sys.kernel_modes())
        f.at(k) = k == 0 ? 1.0 : 0.5;
    f *= 1.0 / norm(f);
    return f;
}

}  // namespace

GammaExponent gamma_exponent(const HurstParam& H) {
    GammaExponent g;
    g.H = H.value();
    g.gamma = g.H >= 0.5 ? 3.0 : (1.0 + g.H) / (1.0 - g.H);
    return g;
}

std::vector<double> residual_s(const SpectralSystem& sys,
                               const std::vector<Field>& psi, double eps,
                               double dt) {
    if (psi.empty()) return {};
    const double eps2 = eps * eps;
    auto integrand = [&](const Field& p) {
        Field g = sys.apply_A(p);
        g *= eps2;
        g += sys.apply_F(p);
        return sys.project_s(g);
    };

    std::vector<double> out;
    out.reserve(psi.size());
    Field r(sys.modes());
    out.push_back(0.0);
    Field g_prev = integrand(psi[0]);
    for (std::size_t m = 0; m + 1 < psi.size(); ++m) {
        const Field g_next = integrand(psi[m + 1]);
        Field mid = g_prev + g_next;
        mid *= 0.5 * dt;
        r = sys.semigroup(r, dt) + sys.semigroup(mid, 0.5 * dt);
        out.push_back(norm(r));
        g_prev = g_next;
    }
    return out;
}

ResidualCReport residual_c(const SpectralSystem& sys,
                           const std::vector<Field>& a_slow,
                           const std::vector<Field>& psi_s_slow, double eps,
                           double H, double dT) {
    if (a_slow.size() != psi_s_slow.size() || a_slow.empty())
        throw std::domain_error("residual_c: a and psi_s grids must match");
    const std::size_t n = a_slow.size();
    const double e1 = std::pow(eps, 2.0 * H + 1.0);
    const double e2 = std::pow(eps, 4.0 * H + 1.0);
    const double e3 = std::pow(eps, 6.0 * H + 1.0);

    ResidualCReport rep;
    auto push_all = [&](const Field& c1, const Field& c2, const Field& c3,
                        const Field& c4) {
        rep.term_a.push_back(e1 * norm(c1));
        rep.term_aas.push_back(3.0 * e1 * norm(c2));
        rep.term_ass.push_back(3.0 * e2 * norm(c3));
        rep.term_sss.push_back(e3 * norm(c4));
        Field sum = e1 * c1 + (3.0 * e1) * c2 + (3.0 * e2) * c3 + e3 * c4;
        rep.total.push_back(norm(sum));
        return sum;
    };

    auto direct_integrand = [&](std::size_t j) {
        Field psi = eps * a_slow[j] + e1 * psi_s_slow[j];
        Field g = sys.apply_A(sys.project_s(psi));
        g *= eps * eps;
        g += sys.apply_F(psi);
        g -= sys.apply_F(sys.project_c(psi));
        return sys.project_c(g);
    };

    Field c1(sys.modes()), c2(sys.modes()), c3(sys.modes()), c4(sys.modes());
    Field direct(sys.modes());
    Field i1_prev = sys.project_c(sys.apply_A(psi_s_slow[0]));
    Field i2_prev =
        sys.project_c(sys.apply_F(a_slow[0], a_slow[0], psi_s_slow[0]));
    Field i3_prev =
        sys.project_c(sys.apply_F(a_slow[0], psi_s_slow[0], psi_s_slow[0]));
    Field i4_prev = sys.project_c(sys.apply_F(psi_s_slow[0]));
    Field d_prev = direct_integrand(0);

    double max_dev = 0.0, max_sum = 0.0;
    Field sum0 = push_all(c1, c2, c3, c4);
    (void)sum0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const Field i1 = sys.project_c(sys.apply_A(psi_s_slow[j + 1]));
        const Field i2 = sys.project_c(
            sys.apply_F(a_slow[j + 1], a_slow[j + 1], psi_s_slow[j + 1]));
        const Field i3 = sys.project_c(
            sys.apply_F(a_slow[j + 1], psi_s_slow[j + 1], psi_s_slow[j + 1]));
        const Field i4 = sys.project_c(sys.apply_F(psi_s_slow[j + 1]));
        c1 += (0.5 * dT) * (i1_prev + i1);
        c2 += (0.5 * dT) * (i2_prev + i2);
        c3 += (0.5 * dT) * (i3_prev + i3);
        c4 += (0.5 * dT) * (i4_prev + i4);
        i1_prev = i1;
        i2_prev = i2;
        i3_prev = i3;
        i4_prev = i4;

        const Field d = direct_integrand(j + 1);
        direct += (0.5 * dT / (eps * eps)) * (d_prev + d);
        d_prev = d;

        const Field sum = push_all(c1, c2, c3, c4);
        max_dev = std::max(max_dev, norm(sum - direct));
        max_sum = std::max(max_sum, norm(sum));
    }
    rep.expansion_dev = max_sum > 0.0 ? max_dev / max_sum : max_dev;
    return rep;
}

double pathwise_error(const SpdeRun& run, const std::vector<Field>& psi) {
    if (psi.size() != run.trajectory.size())
        throw std::domain_error(
            "pathwise_error: psi must be sampled on the run snapshots");
    double sup = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        sup = std::max(sup, norm(run.trajectory[i] - psi[i]));
    return sup;
}

ReplicaRun run_replica(const SpectralSystem& sys, const HurstParam& H,
                       double eps, const Field& u0, std::uint64_t seed,
                       const ReplicaOptions& opt) {
    ReplicaRun rr;
    rr.grid = choose_grids(opt.T0, eps, opt.n_slow, opt.dt_cap);
    const QFbmField noise =
        generate_qfbm(H, opt.noise_modes, Spectrum::power_law(opt.rho),
                      rr.grid.n_fast, rr.grid.dt_fast, seed);
    rr.noise_fingerprint = noise.fingerprint();
    rr.run = solve_spde(sys, noise, rr.grid, u0, rr.grid.fast_per_slow);
    if (rr.run.noise_fingerprint != rr.noise_fingerprint)
        throw std::logic_error("run_replica: noise path not shared");
    if (rr.run.blew_up) {
        rr.blew_up = true;
        rr.err_full = rr.err_first = std::numeric_limits<double>::infinity();
        return rr;
    }

    try {
        const std::vector<Field> b =
            rescaled_noise_b(sys, noise, eps, opt.n_slow);
        const Field a0 = (1.0 / eps) * sys.project_c(u0);
        rr.a = solve_amplitude(sys, b, a0, rr.grid.dT);

        std::vector<std::size_t> at(opt.n_slow + 1);
        for (std::size_t j = 0; j <= opt.n_slow; ++j)
            at[j] = j * rr.grid.fast_per_slow;
        const Field psi_s0 =
            std::pow(eps, -2.0 * H.value() - 1.0) * sys.project_s(u0);
        rr.fou = solve_fou(sys, noise, psi_s0, at);
        rr.psi = assemble_psi(rr.a, rr.fou, eps, H.value(), rr.grid.dt_fast);

        rr.err_full = pathwise_error(rr.run, rr.psi);
        double sup1 = 0.0;
        for (std::size_t j = 0; j < rr.run.trajectory.size(); ++j)
            sup1 = std::max(sup1,
                            norm(rr.run.trajectory[j] - eps * rr.a.values[j]));
        rr.err_first = sup1;
    } catch (const std::runtime_error&) {
        // amplitude guard tripped: count the replica as blown up
        rr.blew_up = true;
        rr.err_full = rr.err_first = std::numeric_limits<double>::infinity();
    }
    return rr;
}

ScalingReport scaling_study(const ScalingConfig& cfg) {
    if (cfg.eps_grid.empty())
        throw std::domain_error("scaling_study: empty eps grid");
    for (std::size_t i = 1; i < cfg.eps_grid.size(); ++i)
        if (!(cfg.eps_grid[i] < cfg.eps_grid[i - 1]))
            throw std::domain_error(
                "scaling_study: eps grid must be strictly decreasing");
    const HurstParam H(cfg.hurst);
    SpectralSystem sys(cfg.preset, cfg.modes, cfg.nu);
    const Field dir = kernel_direction(sys);

    ReplicaOptions opt;
    opt.n_slow = cfg.n_slow;
    opt.noise_modes = cfg.noise_modes;
    opt.rho = cfg.rho;
    opt.T0 = cfg.T0;

    ScalingReport rep;
    rep.H = cfg.hurst;
    rep.seed_base = cfg.seed_base;
    rep.gamma_theory = gamma_exponent(H).gamma;

    std::vector<double> medians, medians_first;
    for (std::size_t ie = 0; ie < cfg.eps_grid.size(); ++ie) {
        const double eps = cfg.eps_grid[ie];
        const Field u0 = (eps * cfg.a0_scale) * dir;
        std::vector<double> errs(cfg.replicas), errs1(cfg.replicas);
        std::vector<char> bad(cfg.replicas, 0);
        parallel_for(cfg.replicas, cfg.jobs, [&](std::size_t r) {
            const std::uint64_t seed = hash64(hash64(cfg.seed_base, ie), r);
            const ReplicaRun rr = run_replica(sys, H, eps, u0, seed, opt);
            errs[r] = rr.err_full;
            errs1[r] = rr.err_first;
            bad[r] = rr.blew_up ? 1 : 0;
        });
        std::vector<double> kept, kept1;
        std::size_t excluded = 0;
        for (std::size_t r = 0; r < cfg.replicas; ++r) {
            if (bad[r]) {
                ++excluded;
                continue;
            }
            kept.push_back(errs[r]);
            kept1.push_back(errs1[r]);
        }
        ScalingRow row;
        row.eps = eps;
        row.replicas = cfg.replicas;
        row.excluded = excluded;
        row.median = quantile(kept, 0.5);
        if (kept.size() >= 30) {
            row.q10 = quantile(kept, 0.1);
            row.q90 = quantile(kept, 0.9);
        } else {
            row.q10 = row.q90 = row.median;
        }
        rep.rows.push_back(row);
        medians.push_back(row.median);
        medians_first.push_back(quantile(kept1, 0.5));
        if (excluded * 20 > cfg.replicas) rep.invalid = true;
    }

    if (cfg.eps_grid.size() >= 2) {
        const FitResult fit = fit_loglog(cfg.eps_grid, medians);
        rep.slope = fit.slope;
        rep.slope_stderr = fit.stderr_;
        rep.slope_first_order = fit_loglog(cfg.eps_grid, medians_first).slope;
    }
    if (rep.H >= 0.5)
        rep.pass = std::abs(rep.slope - rep.gamma_theory) <= 0.5;
    else
        rep.pass = rep.slope >= 1.0 + 2.0 * rep.H - 0.3;
    if (rep.invalid) rep.pass = false;
    return rep;
}

void write_scaling_csv(const ScalingReport& rep, const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out << "H,eps,median_err,q10,q90,replicas,excluded\n";
    for (const ScalingRow& r : rep.rows)
        out << fmt_g(rep.H) << ',' << fmt_g(r.eps) << ',' << fmt_g(r.median)
            << ',' << fmt_g(r.q10) << ',' << fmt_g(r.q90) << ',' << r.replicas
            << ',' << r.excluded << '\n';
}

void write_scaling_summary(const ScalingReport& rep,
                           const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out << "hurst=" << fmt_g(rep.H) << '\n';
    out << "slope=" << fmt_g(rep.slope) << '\n';
    out << "slope_stderr=" << fmt_g(rep.slope_stderr) << '\n';
    out << "slope_first_order=" << fmt_g(rep.slope_first_order) << '\n';
    out << "gamma_theory=" << fmt_g(rep.gamma_theory) << '\n';
    out << "pass=" << (rep.pass ? 1 : 0) << '\n';
    out << "invalid=" << (rep.invalid ? 1 : 0) << '\n';
    out << "seed_base=" << rep.seed_base << '\n';
}

OmegaConditions omega_conditions(const SpectralSystem& sys,
                                 const QFbmField& noise, double eps,
                                 double kappa, const Field& u0,
                                 std::size_t n_slow) {
    const double H = noise.hurst.value();
    OmegaConditions oc;
    oc.beta = H <= 0.5 ? H - kappa : 0.5 * (0.5 + H);

    double sup_conv = 0.0;
    stochastic_convolution_scan(sys, noise,
                                [&](std::size_t, const Field& wl) {
                                    sup_conv = std::max(
                                        sup_conv, norm(sys.project_s(wl)));
                                });
    oc.sup_conv = sup_conv;

    if (noise.steps() % n_slow != 0)
        throw std::domain_error("omega_conditions: grids do not align");
    const std::size_t mult = noise.steps() / n_slow;
    const double dT = noise.dt * eps * eps * static_cast<double>(mult);
    NoiseIncrements w(sys, noise);
    std::vector<Field> w_slow;
    w_slow.reserve(n_slow + 1);
    for (std::size_t j = 0; j <= n_slow; ++j)
        w_slow.push_back(w.value(j * mult));
    oc.holder_w = holder_norm(w_slow, dT, oc.beta);

    const double thresh = std::pow(eps, -kappa);
    oc.conv_bound = sup_conv <= thresh;
    oc.holder_bound = oc.holder_w <= std::pow(eps, -2.0 * H - kappa);
    oc.psi_s0_bound =
        std::pow(eps, -2.0 * H - 1.0) * norm(sys.project_s(u0)) <= thresh;
    oc.psi_c0_bound = (1.0 / eps) * norm(sys.project_c(u0)) <= thresh;
    return oc;
}

OmegaReport omega_event_monitor(const SpectralSystem& sys,
                                const HurstParam& H, double eps, double kappa,
                                std::size_t replicas, std::uint64_t seed_base,
                                const ReplicaOptions& opt, std::size_t jobs) {
    const GridSpec grid = choose_grids(opt.T0, eps, opt.n_slow);
    const Field u0 = (eps * 0.5) * kernel_direction(sys);

    OmegaReport rep;
    rep.eps = eps;
    rep.kappa = kappa;
    rep.H = H.value();
    rep.replicas = replicas;

    std::vector<OmegaConditions> results(replicas);
    parallel_for(replicas, jobs, [&](std::size_t r) {
        const QFbmField noise =
            generate_qfbm(H, opt.noise_modes, Spectrum::power_law(opt.rho),
                          grid.n_fast, grid.dt_fast, hash64(seed_base, r));
        results[r] = omega_conditions(sys, noise, eps, kappa, u0, opt.n_slow);
    });
    for (const OmegaConditions& oc : results) {
        rep.count_conv += oc.conv_bound;
        rep.count_holder += oc.holder_bound;
        rep.count_psi_s0 += oc.psi_s0_bound;
        rep.count_psi_c0 += oc.psi_c0_bound;
        rep.count_all += oc.all();
    }
    rep.frequency =
        static_cast<double>(rep.count_all) / static_cast<double>(replicas);
    return rep;
}

MomentReport convolution_moment_check(const HurstParam& H,
                                      const std::vector<double>& lambda_grid,
                                      double alpha, std::size_t replicas,
                                      std::uint64_t seed_base,
                                      std::size_t jobs) {
    if (!(alpha > 0.0 && alpha < H.value()))
        throw std::domain_error(
            "convolution_moment_check: fix alpha in (0,H)");
    if (lambda_grid.empty() || replicas == 0)
        throw std::domain_error(
            "convolution_moment_check: need lambdas and replicas");

    const std::vector<double> t_grid = {1.0, 2.0, 5.0, 10.0};
    const double dt = 1.0 / 256.0;
    const std::size_t n =
        static_cast<std::size_t>(std::llround(t_grid.back() / dt));

    // Cell-averaged kernel weights; the (t-r)^{-alpha} singularity is
    // integrated exactly in the variable u = s^{1-alpha}.
    const GaussLegendre gl(8);
    const double p = 1.0 - alpha;
    std::vector<std::vector<std::vector<double>>> weights(lambda_grid.size());
    for (std::size_t il = 0; il < lambda_grid.size(); ++il) {
        const double lam = lambda_grid[il];
        weights[il].resize(t_grid.size());
        for (std::size_t it = 0; it < t_grid.size(); ++it) {
            const std::size_t mt =
                static_cast<std::size_t>(std::llround(t_grid[it] / dt));
            std::vector<double>& w = weights[il][it];
            w.resize(mt);
            for (std::size_t m = 0; m < mt; ++m) {
                const double s_lo = dt * static_cast<double>(mt - 1 - m);
                const double s_hi = dt * static_cast<double>(mt - m);
                const double cell = gl.integrate(
                    std::pow(s_lo, p), std::pow(s_hi, p), [&](double u) {
                        return std::exp(lam * std::pow(u, 1.0 / p)) / p;
                    });
                w[m] = cell / dt;
            }
        }
    }

    std::vector<std::vector<double>> acc(
        lambda_grid.size(), std::vector<double>(t_grid.size(), 0.0));
    std::mutex acc_mutex;
    parallel_for(replicas, jobs, [&](std::size_t r) {
        const FbmPath path = generate_fbm(H, n, dt, hash64(seed_base, r));
        std::vector<std::vector<double>> local(
            lambda_grid.size(), std::vector<double>(t_grid.size(), 0.0));
        for (std::size_t il = 0; il < lambda_grid.size(); ++il)
            for (std::size_t it = 0; it < t_grid.size(); ++it) {
                const std::vector<double>& w = weights[il][it];
                double y = 0.0;
                for (std::size_t m = 0; m < w.size(); ++m)
                    y += w[m] * (path.values[m + 1] - path.values[m]);
                local[il][it] = y * y;
            }
        std::lock_guard<std::mutex> lock(acc_mutex);
        for (std::size_t il = 0; il < lambda_grid.size(); ++il)
            for (std::size_t it = 0; it < t_grid.size(); ++it)
                acc[il][it] += local[il][it];
    });

    MomentReport rep;
    rep.H = H.value();
    rep.alpha = alpha;
    rep.replicas = replicas;
    rep.pass = true;
    for (std::size_t il = 0; il < lambda_grid.size(); ++il) {
        MomentRow row;
        row.lambda = lambda_grid[il];
        row.t_grid = t_grid;
        for (std::size_t it = 0; it < t_grid.size(); ++it)
            row.second_moment.push_back(acc[il][it] /
                                        static_cast<double>(replicas));
        const auto [mn, mx] = std::minmax_element(row.second_moment.begin(),
                                                  row.second_moment.end());
        row.plateau_ratio = *mx / *mn;
        const double m5 = row.second_moment[2], m10 = row.second_moment[3];
        row.tail_agreement = std::abs(m10 - m5) / m5;
        if (!(std::isfinite(*mx) && row.plateau_ratio <= 2.0)) rep.pass = false;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace ampeq
