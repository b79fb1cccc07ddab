// ampeq: amplitude-equation approximation toolkit for SPDEs driven by
// fractional noise. Subcommands generate fBm paths, run coupled
// SPDE/approximation simulations, sweep convergence orders, and verify
// the Holder-scaling and moment estimates behind the error analysis.
//
// Exit codes: 0 pass, 1 failed assertion, 2 invalid configuration,
// 3 blow-up flagged.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ampeq/amplitude.hpp"
#include "ampeq/experiment.hpp"
#include "ampeq/fbm.hpp"
#include "ampeq/holder.hpp"
#include "ampeq/manifest.hpp"
#include "ampeq/parallel.hpp"
#include "ampeq/rng.hpp"
#include "ampeq/spde.hpp"

namespace fs = std::filesystem;
using namespace ampeq;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitBlowup = 3;

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Late-bound config defaults: a manifest value is applied only when the
// corresponding flag was not given on the command line.
struct ConfigBindings {
    CLI::App* cmd = nullptr;
    std::vector<std::string> keys;
    std::vector<std::function<void(const Manifest&)>> apply;

    void bind_double(const std::string& key, const std::string& flag,
                     double& var) {
        keys.push_back(key);
        apply.push_back([this, key, flag, &var](const Manifest& m) {
            if (cmd->count(flag) == 0 && m.has(key)) var = m.get_double(key);
        });
    }
    void bind_int(const std::string& key, const std::string& flag,
                  std::int64_t& var) {
        keys.push_back(key);
        apply.push_back([this, key, flag, &var](const Manifest& m) {
            if (cmd->count(flag) == 0 && m.has(key)) var = m.get_int(key);
        });
    }
    void bind_uint(const std::string& key, const std::string& flag,
                   std::uint64_t& var) {
        keys.push_back(key);
        apply.push_back([this, key, flag, &var](const Manifest& m) {
            if (cmd->count(flag) == 0 && m.has(key)) var = m.get_uint(key);
        });
    }
    void bind_string(const std::string& key, const std::string& flag,
                     std::string& var) {
        keys.push_back(key);
        apply.push_back([this, key, flag, &var](const Manifest& m) {
            if (cmd->count(flag) == 0 && m.has(key)) var = m.get(key);
        });
    }

    void merge(const std::string& config_path) {
        if (config_path.empty()) return;
        const Manifest m = Manifest::load(config_path);
        m.require_known_keys(keys);
        for (const auto& f : apply) f(m);
    }
};

Preset parse_preset(const std::string& s) {
    if (s == "laplacian") return Preset::LaplacianPeriodic;
    if (s == "swift-hohenberg") return Preset::SwiftHohenberg;
    throw std::invalid_argument(
        "preset must be 'laplacian' or 'swift-hohenberg'");
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const std::size_t comma = s.find(',', pos);
        const std::string tok =
            s.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!tok.empty()) out.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty grid list");
    return out;
}

fs::path prepare_out(const std::string& out) {
    fs::path dir(out.empty() ? "." : out);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + p.string());
    return f;
}

// ---------------------------------------------------------------- gen-fbm

int cmd_gen_fbm(double hurst, std::int64_t steps, double dt,
                std::uint64_t seed, const std::string& method,
                const std::string& out) {
    validate_hurst(hurst);
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    FbmMethod m = FbmMethod::CirculantEmbedding;
    if (method == "cholesky")
        m = FbmMethod::Cholesky;
    else if (method != "circulant")
        throw std::invalid_argument("method must be circulant or cholesky");

    const fs::path dir = prepare_out(out);
    const HurstParam H(hurst);
    const FbmPath path =
        generate_fbm(H, static_cast<std::size_t>(steps), dt, seed, m);
    write_fbm_binary(path, (dir / "path.bin").string());
    write_fbm_csv(path, (dir / "path.csv").string());

    Manifest man;
    man.set("command", std::string("gen-fbm"));
    man.set("hurst", hurst);
    man.set("steps", steps);
    man.set("dt", dt);
    man.set("seed", seed);
    man.set("method", method);
    man.save((dir / "manifest.txt").string());

    // single-path increment variance against the stationary dt^{2H} law
    double s2 = 0.0;
    for (std::size_t i = 0; i + 1 < path.values.size(); ++i) {
        const double d = path.values[i + 1] - path.values[i];
        s2 += d * d;
    }
    s2 /= static_cast<double>(path.steps());
    const double analytic = std::pow(dt, 2.0 * hurst);
    std::printf(
        "gen-fbm: n=%lld H=%g empirical increment var %.6g vs analytic "
        "dt^2H %.6g (ratio %.4f)\n",
        static_cast<long long>(steps), hurst, s2, analytic, s2 / analytic);
    return kExitPass;
}

// --------------------------------------------------------------- simulate

int cmd_simulate(const std::string& preset, double hurst, double eps,
                 double t0, std::int64_t modes, std::int64_t noise_modes,
                 double rho, double nu, std::uint64_t seed,
                 std::int64_t stride, const std::string& out) {
    validate_hurst(hurst);
    validate_eps(eps);
    validate_modes(modes);
    validate_rho(rho);
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");

    const fs::path dir = prepare_out(out);
    SpectralSystem sys(parse_preset(preset), static_cast<int>(modes), nu);
    const HurstParam H(hurst);
    ReplicaOptions opt;
    opt.T0 = t0;
    opt.noise_modes = static_cast<std::size_t>(noise_modes);
    opt.rho = rho;

    Field dir0(sys.modes());
    for (int k : sys.kernel_modes()) dir0.at(k) = k == 0 ? 1.0 : 0.5;
    dir0 *= 1.0 / norm(dir0);
    const Field u0 = (0.5 * eps) * dir0;

    const ReplicaRun rr = run_replica(sys, H, eps, u0, seed, opt);

    Manifest man;
    man.set("command", std::string("simulate"));
    man.set("preset", preset);
    man.set("hurst", hurst);
    man.set("eps", eps);
    man.set("t0", t0);
    man.set("modes", modes);
    man.set("noise_modes", noise_modes);
    man.set("rho", rho);
    man.set("nu", nu);
    man.set("seed", seed);
    man.set("stride", stride);
    man.save((dir / "manifest.txt").string());

    {
        auto f = open_out(dir / "timeseries.csv");
        f << "t,norm_u,norm_psi,err\n";
        const std::size_t upto =
            rr.blew_up ? rr.run.trajectory.size()
                       : std::min(rr.run.trajectory.size(), rr.psi.size());
        for (std::size_t j = 0; j < upto;
             j += static_cast<std::size_t>(stride)) {
            const double t =
                rr.grid.dt_fast * static_cast<double>(rr.run.snapshot_idx[j]);
            f << fmt_g(t) << ',' << fmt_g(norm(rr.run.trajectory[j])) << ',';
            if (!rr.blew_up && j < rr.psi.size())
                f << fmt_g(norm(rr.psi[j])) << ','
                  << fmt_g(norm(rr.run.trajectory[j] - rr.psi[j]));
            else
                f << "nan,nan";
            f << '\n';
        }
    }
    {
        auto f = open_out(dir / "summary.txt");
        f << "blew_up=" << (rr.blew_up ? 1 : 0) << '\n';
        f << "err_full=" << fmt_g(rr.err_full) << '\n';
        f << "err_first=" << fmt_g(rr.err_first) << '\n';
        f << "noise_fingerprint=" << rr.noise_fingerprint << '\n';
        f << "n_fast=" << rr.grid.n_fast << '\n';
        f << "dt_fast=" << fmt_g(rr.grid.dt_fast) << '\n';
    }
    if (rr.blew_up) {
        std::fprintf(stderr, "simulate: blow-up guard tripped\n");
        return kExitBlowup;
    }
    std::printf("simulate: sup error %.6g (first-order %.6g)\n", rr.err_full,
                rr.err_first);
    return kExitPass;
}

// ---------------------------------------------------------- scaling-study

int cmd_scaling_study(double hurst, const std::string& eps_grid,
                      std::int64_t replicas, const std::string& preset,
                      std::uint64_t seed_base, std::int64_t modes,
                      std::int64_t noise_modes, double rho, double nu,
                      double t0, std::uint64_t jobs, const std::string& out) {
    validate_hurst(hurst);
    validate_modes(modes);
    validate_rho(rho);
    if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");

    ScalingConfig cfg;
    cfg.preset = parse_preset(preset);
    cfg.modes = static_cast<int>(modes);
    cfg.nu = nu;
    cfg.hurst = hurst;
    cfg.eps_grid = parse_grid(eps_grid);
    for (double e : cfg.eps_grid) validate_eps(e);
    cfg.replicas = static_cast<std::size_t>(replicas);
    cfg.T0 = t0;
    cfg.noise_modes = static_cast<std::size_t>(noise_modes);
    cfg.rho = rho;
    cfg.seed_base = seed_base;
    cfg.jobs = jobs;

    const fs::path dir = prepare_out(out);
    Manifest man;
    man.set("command", std::string("scaling-study"));
    man.set("hurst", hurst);
    man.set("eps_grid", eps_grid);
    man.set("replicas", replicas);
    man.set("preset", preset);
    man.set("seed_base", seed_base);
    man.set("modes", modes);
    man.set("noise_modes", noise_modes);
    man.set("rho", rho);
    man.set("nu", nu);
    man.set("t0", t0);
    man.save((dir / "manifest.txt").string());

    const ScalingReport rep = scaling_study(cfg);
    write_scaling_csv(rep, (dir / "scaling_report.csv").string());
    write_scaling_summary(rep, (dir / "summary.txt").string());
    std::printf(
        "scaling-study: slope %.4f (stderr %.4f), gamma_theory %.4f, %s\n",
        rep.slope, rep.slope_stderr, rep.gamma_theory,
        rep.pass ? "pass" : "FAIL");
    if (rep.invalid) {
        std::fprintf(stderr, "scaling-study: >5%% replicas blew up\n");
        return kExitBlowup;
    }
    return rep.pass ? kExitPass : kExitFail;
}

// ----------------------------------------------------------- holder-check

void write_ratio_report(const RatioReport& rep, const fs::path& dir) {
    auto f = open_out(dir / "ratios.csv");
    f << "eps,norm,ratio\n";
    for (std::size_t i = 0; i < rep.eps_grid.size(); ++i)
        f << fmt_g(rep.eps_grid[i]) << ',' << fmt_g(rep.norms[i]) << ','
          << fmt_g(rep.ratios[i]) << '\n';
    auto s = open_out(dir / "summary.txt");
    s << "exponent=" << fmt_g(rep.exponent) << '\n';
    s << "fitted_slope=" << fmt_g(rep.fitted_slope) << '\n';
    s << "max_over_median=" << fmt_g(rep.max_over_median) << '\n';
    s << "pass=" << (rep.pass ? 1 : 0) << '\n';
}

int holder_identity(double hurst, const fs::path& dir, std::uint64_t seed) {
    const double eps = 0.25;
    const std::size_t n_finest = 4000;  // slow dt 0.25e-3 .. 1e-3
    const double dt_s_finest = 1.0 / static_cast<double>(n_finest);
    const double dt_f_finest = dt_s_finest / (eps * eps);
    SpectralSystem sys(Preset::LaplacianPeriodic, 8, 0.0);
    const HurstParam H(hurst);
    const QFbmField noise = generate_qfbm(H, 8, Spectrum::power_law(2.0),
                                          n_finest, dt_f_finest, seed);

    auto f = open_out(dir / "identity.csv");
    f << "dt,deviation\n";
    std::vector<double> devs;
    for (std::size_t factor : {4, 2, 1}) {
        const QFbmField sub = subsample_noise(noise, factor);
        const double dev = identity_l46_deviation(sys, sub, eps);
        devs.push_back(dev);
        f << fmt_g(dt_s_finest * static_cast<double>(factor)) << ','
          << fmt_g(dev) << '\n';
    }
    const bool pass = devs[1] < devs[0] && devs[2] < devs[1] && devs[2] < 1e-2;
    auto s = open_out(dir / "summary.txt");
    s << "deviation_finest=" << fmt_g(devs[2]) << '\n';
    s << "pass=" << (pass ? 1 : 0) << '\n';
    std::printf("holder-check identity: deviation %.3g (%s)\n", devs[2],
                pass ? "pass" : "FAIL");
    return pass ? kExitPass : kExitFail;
}

int holder_young(double hurst, double alpha, const fs::path& dir,
                 std::uint64_t seed) {
    const double eps = 0.1, beta_p = alpha;
    const std::size_t n_slow = 256, mult = 8;
    // Swift-Hohenberg: for the constant Laplacian kernel F_c(a,a,z)
    // vanishes identically and the bound is trivial
    SpectralSystem sys(Preset::SwiftHohenberg, 8, 1.0);
    const HurstParam H(hurst);
    const double dT = 1.0 / static_cast<double>(n_slow);
    const double dt_f = dT / (eps * eps) / static_cast<double>(mult);

    // calibration/holdout split: freeze the constant on the first half
    const std::size_t total = 20, calib = 10;
    std::vector<double> ratios;
    for (std::size_t r = 0; r < total; ++r) {
        const QFbmField noise =
            generate_qfbm(H, 8, Spectrum::power_law(2.0), n_slow * mult, dt_f,
                          hash64(seed, r));
        const std::vector<Field> b = rescaled_noise_b(sys, noise, eps, n_slow);
        Field a0(sys.modes());
        for (int k : sys.kernel_modes()) a0.at(k) = k == 0 ? 0.5 : 0.25;
        const AmplitudePath a = solve_amplitude(sys, b, a0, dT);
        const YoungCheck yc =
            young_bound_check(sys, a.values, noise, eps, alpha, beta_p);
        ratios.push_back(yc.ratio);
    }
    double frozen = 0.0;
    for (std::size_t r = 0; r < calib; ++r)
        frozen = std::max(frozen, ratios[r]);
    frozen *= 1.25;
    bool pass = true;
    for (std::size_t r = calib; r < total; ++r)
        if (ratios[r] > frozen) pass = false;

    auto f = open_out(dir / "young.csv");
    f << "replica,ratio\n";
    for (std::size_t r = 0; r < total; ++r)
        f << r << ',' << fmt_g(ratios[r]) << '\n';
    auto s = open_out(dir / "summary.txt");
    s << "frozen_constant=" << fmt_g(frozen) << '\n';
    s << "pass=" << (pass ? 1 : 0) << '\n';
    std::printf("holder-check young: frozen constant %.4g (%s)\n", frozen,
                pass ? "pass" : "FAIL");
    return pass ? kExitPass : kExitFail;
}

int cmd_holder_check(const std::string& lemma, double alpha, double gamma,
                     const std::string& eps_grid, double hurst,
                     std::uint64_t seed, const std::string& out) {
    const fs::path dir = prepare_out(out);
    Manifest man;
    man.set("command", std::string("holder-check"));
    man.set("lemma", lemma);
    man.set("alpha", alpha);
    man.set("gamma", gamma);
    man.set("eps_grid", eps_grid);
    man.set("hurst", hurst);
    man.set("seed", seed);
    man.save((dir / "manifest.txt").string());

    std::vector<double> grid;
    if (!eps_grid.empty())
        grid = parse_grid(eps_grid);
    else
        for (int k = 3; k <= 8; ++k) grid.push_back(std::pow(2.0, -k));

    const std::size_t n = (1u << 11) + 1;
    if (lemma == "a1") {
        const RatioReport rep =
            check_lemma_A1(alpha, profile_continuous(n), grid);
        write_ratio_report(rep, dir);
        std::printf("holder-check a1: max/median %.3f (%s)\n",
                    rep.max_over_median, rep.pass ? "pass" : "FAIL");
        return rep.pass ? kExitPass : kExitFail;
    }
    if (lemma == "a2") {
        const RatioReport rep =
            check_lemma_A2(alpha, profile_smooth_zero(n), grid);
        write_ratio_report(rep, dir);
        std::printf("holder-check a2: max/median %.3f (%s)\n",
                    rep.max_over_median, rep.pass ? "pass" : "FAIL");
        return rep.pass ? kExitPass : kExitFail;
    }
    if (lemma == "a3") {
        // roughness must extend below the eps^2 kernel scale of the
        // smallest tested eps, so the rough profile is sampled deeper
        const RatioReport rep = check_lemma_A3(
            alpha, gamma, 0.0, profile_weierstrass((1u << 17) + 1, gamma),
            grid);
        write_ratio_report(rep, dir);
        std::printf("holder-check a3: max/median %.3f (%s)\n",
                    rep.max_over_median, rep.pass ? "pass" : "FAIL");
        return rep.pass ? kExitPass : kExitFail;
    }
    if (lemma == "identity") return holder_identity(hurst, dir, seed);
    if (lemma == "young") return holder_young(hurst, alpha, dir, seed);
    throw std::invalid_argument(
        "lemma must be one of a1, a2, a3, identity, young");
}

// ---------------------------------------------------- convolution-moments

int cmd_convolution_moments(double hurst, double alpha, std::int64_t replicas,
                            std::uint64_t seed, std::uint64_t jobs,
                            const std::string& out) {
    validate_hurst(hurst);
    if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");

    const fs::path dir = prepare_out(out);
    Manifest man;
    man.set("command", std::string("convolution-moments"));
    man.set("hurst", hurst);
    man.set("alpha", alpha);
    man.set("replicas", replicas);
    man.set("seed", seed);
    man.save((dir / "manifest.txt").string());

    const MomentReport rep = convolution_moment_check(
        HurstParam(hurst), {-1.0, -2.0, -4.0}, alpha,
        static_cast<std::size_t>(replicas), seed, jobs);

    auto f = open_out(dir / "moments.csv");
    f << "lambda,t,second_moment\n";
    for (const MomentRow& row : rep.rows)
        for (std::size_t i = 0; i < row.t_grid.size(); ++i)
            f << fmt_g(row.lambda) << ',' << fmt_g(row.t_grid[i]) << ','
              << fmt_g(row.second_moment[i]) << '\n';
    auto s = open_out(dir / "summary.txt");
    double worst_plateau = 0.0, worst_tail = 0.0;
    for (const MomentRow& row : rep.rows) {
        worst_plateau = std::max(worst_plateau, row.plateau_ratio);
        worst_tail = std::max(worst_tail, row.tail_agreement);
    }
    s << "max_plateau_ratio=" << fmt_g(worst_plateau) << '\n';
    s << "max_tail_disagreement=" << fmt_g(worst_tail) << '\n';
    s << "pass=" << (rep.pass ? 1 : 0) << '\n';
    std::printf("convolution-moments: plateau ratio %.3f, tail %.3f (%s)\n",
                worst_plateau, worst_tail, rep.pass ? "pass" : "FAIL");
    return rep.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"amplitude-equation approximation toolkit"};
    app.require_subcommand(1);

    std::uint64_t jobs = 0;
    app.add_option("--jobs", jobs,
                   "worker threads (0: AMPEQ_JOBS or hardware)");

    // gen-fbm
    double gf_hurst = 0.5, gf_dt = 0.001;
    std::int64_t gf_steps = 1024;
    std::uint64_t gf_seed = 1;
    std::string gf_method = "circulant", gf_out = "out_gen_fbm";
    std::string gf_config;
    auto* gen = app.add_subcommand("gen-fbm", "sample one fBm path");
    gen->add_option("--hurst", gf_hurst);
    gen->add_option("--steps", gf_steps);
    gen->add_option("--dt", gf_dt);
    gen->add_option("--seed", gf_seed);
    gen->add_option("--method", gf_method);
    gen->add_option("--out", gf_out);
    gen->add_option("--config", gf_config);
    ConfigBindings gfb;
    gfb.cmd = gen;
    gfb.bind_double("hurst", "--hurst", gf_hurst);
    gfb.bind_int("steps", "--steps", gf_steps);
    gfb.bind_double("dt", "--dt", gf_dt);
    gfb.bind_uint("seed", "--seed", gf_seed);
    gfb.bind_string("method", "--method", gf_method);
    gfb.bind_string("out", "--out", gf_out);
    gfb.keys.push_back("command");

    // simulate
    std::string si_preset = "laplacian", si_out = "out_simulate", si_config;
    double si_hurst = 0.5, si_eps = 0.1, si_t0 = 1.0, si_rho = 2.0,
           si_nu = 1.0;
    std::int64_t si_modes = 32, si_noise_modes = 32, si_stride = 1;
    std::uint64_t si_seed = 1;
    auto* sim = app.add_subcommand("simulate",
                                   "one coupled SPDE/approximation run");
    sim->add_option("--preset", si_preset);
    sim->add_option("--hurst", si_hurst);
    sim->add_option("--eps", si_eps);
    sim->add_option("--t0", si_t0);
    sim->add_option("--modes", si_modes);
    sim->add_option("--noise-modes", si_noise_modes);
    sim->add_option("--rho", si_rho);
    sim->add_option("--nu", si_nu);
    sim->add_option("--seed", si_seed);
    sim->add_option("--stride", si_stride);
    sim->add_option("--out", si_out);
    sim->add_option("--config", si_config);
    ConfigBindings sib;
    sib.cmd = sim;
    sib.bind_string("preset", "--preset", si_preset);
    sib.bind_double("hurst", "--hurst", si_hurst);
    sib.bind_double("eps", "--eps", si_eps);
    sib.bind_double("t0", "--t0", si_t0);
    sib.bind_int("modes", "--modes", si_modes);
    sib.bind_int("noise_modes", "--noise-modes", si_noise_modes);
    sib.bind_double("rho", "--rho", si_rho);
    sib.bind_double("nu", "--nu", si_nu);
    sib.bind_uint("seed", "--seed", si_seed);
    sib.bind_int("stride", "--stride", si_stride);
    sib.bind_string("out", "--out", si_out);
    sib.keys.push_back("command");

    // scaling-study
    std::string sc_eps = "0.2,0.141,0.1,0.071,0.05", sc_preset = "laplacian";
    std::string sc_out = "out_scaling", sc_config;
    double sc_hurst = 0.5, sc_rho = 2.0, sc_nu = 1.0, sc_t0 = 1.0;
    std::int64_t sc_replicas = 100, sc_modes = 32, sc_noise_modes = 32;
    std::uint64_t sc_seed = 1;
    auto* sca = app.add_subcommand("scaling-study",
                                   "epsilon sweep of the pathwise error");
    sca->add_option("--hurst", sc_hurst);
    sca->add_option("--eps-grid", sc_eps);
    sca->add_option("--replicas", sc_replicas);
    sca->add_option("--preset", sc_preset);
    sca->add_option("--seed-base", sc_seed);
    sca->add_option("--modes", sc_modes);
    sca->add_option("--noise-modes", sc_noise_modes);
    sca->add_option("--rho", sc_rho);
    sca->add_option("--nu", sc_nu);
    sca->add_option("--t0", sc_t0);
    sca->add_option("--out", sc_out);
    sca->add_option("--config", sc_config);
    ConfigBindings scb;
    scb.cmd = sca;
    scb.bind_double("hurst", "--hurst", sc_hurst);
    scb.bind_string("eps_grid", "--eps-grid", sc_eps);
    scb.bind_int("replicas", "--replicas", sc_replicas);
    scb.bind_string("preset", "--preset", sc_preset);
    scb.bind_uint("seed_base", "--seed-base", sc_seed);
    scb.bind_int("modes", "--modes", sc_modes);
    scb.bind_int("noise_modes", "--noise-modes", sc_noise_modes);
    scb.bind_double("rho", "--rho", sc_rho);
    scb.bind_double("nu", "--nu", sc_nu);
    scb.bind_double("t0", "--t0", sc_t0);
    scb.bind_string("out", "--out", sc_out);
    scb.keys.push_back("command");

    // holder-check
    std::string hc_lemma = "a1", hc_eps, hc_out = "out_holder", hc_config;
    double hc_alpha = 0.4, hc_gamma = 0.3, hc_hurst = 0.3;
    std::uint64_t hc_seed = 1;
    auto* hol = app.add_subcommand("holder-check",
                                   "convolution scaling / identity checks");
    hol->add_option("--lemma", hc_lemma);
    hol->add_option("--alpha", hc_alpha);
    hol->add_option("--gamma", hc_gamma);
    hol->add_option("--eps-grid", hc_eps);
    hol->add_option("--hurst", hc_hurst);
    hol->add_option("--seed", hc_seed);
    hol->add_option("--out", hc_out);
    hol->add_option("--config", hc_config);
    ConfigBindings hcb;
    hcb.cmd = hol;
    hcb.bind_string("lemma", "--lemma", hc_lemma);
    hcb.bind_double("alpha", "--alpha", hc_alpha);
    hcb.bind_double("gamma", "--gamma", hc_gamma);
    hcb.bind_string("eps_grid", "--eps-grid", hc_eps);
    hcb.bind_double("hurst", "--hurst", hc_hurst);
    hcb.bind_uint("seed", "--seed", hc_seed);
    hcb.bind_string("out", "--out", hc_out);
    hcb.keys.push_back("command");

    // convolution-moments
    double cm_hurst = 0.75, cm_alpha = 0.2;
    std::int64_t cm_replicas = 10000;
    std::uint64_t cm_seed = 1;
    std::string cm_out = "out_moments", cm_config;
    auto* mom = app.add_subcommand("convolution-moments",
                                   "factorization-process moment plateau");
    mom->add_option("--hurst", cm_hurst);
    mom->add_option("--alpha", cm_alpha);
    mom->add_option("--replicas", cm_replicas);
    mom->add_option("--seed", cm_seed);
    mom->add_option("--out", cm_out);
    mom->add_option("--config", cm_config);
    ConfigBindings cmb;
    cmb.cmd = mom;
    cmb.bind_double("hurst", "--hurst", cm_hurst);
    cmb.bind_double("alpha", "--alpha", cm_alpha);
    cmb.bind_int("replicas", "--replicas", cm_replicas);
    cmb.bind_uint("seed", "--seed", cm_seed);
    cmb.bind_string("out", "--out", cm_out);
    cmb.keys.push_back("command");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e);
        return r == 0 ? kExitPass : kExitInvalid;
    }

    try {
        if (*gen) {
            gfb.merge(gf_config);
            return cmd_gen_fbm(gf_hurst, gf_steps, gf_dt, gf_seed, gf_method,
                               gf_out);
        }
        if (*sim) {
            sib.merge(si_config);
            return cmd_simulate(si_preset, si_hurst, si_eps, si_t0, si_modes,
                                si_noise_modes, si_rho, si_nu, si_seed,
                                si_stride, si_out);
        }
        if (*sca) {
            scb.merge(sc_config);
            return cmd_scaling_study(sc_hurst, sc_eps, sc_replicas, sc_preset,
                                     sc_seed, sc_modes, sc_noise_modes, sc_rho,
                                     sc_nu, sc_t0, jobs, sc_out);
        }
        if (*hol) {
            hcb.merge(hc_config);
            return cmd_holder_check(hc_lemma, hc_alpha, hc_gamma, hc_eps,
                                    hc_hurst, hc_seed, hc_out);
        }
        if (*mom) {
            cmb.merge(cm_config);
            return cmd_convolution_moments(cm_hurst, cm_alpha, cm_replicas,
                                           cm_seed, jobs, cm_out);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFail;
    }
    return kExitInvalid;
}
