#include "ampeq/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>

#include "ampeq/gauss_legendre.hpp"
#include "ampeq/rng.hpp"

namespace ampeq {

double fbm_covariance(double t, double s, const HurstParam& H) {
    if (t < 0.0 || s < 0.0)
        throw std::domain_error("fbm_covariance: negative time");
    const double h2 = 2.0 * H.value();
    return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::abs(t - s), h2));
}

double fgn_autocovariance(std::int64_t k, const HurstParam& H) {
    const double h2 = 2.0 * H.value();
    const double a = static_cast<double>(std::llabs(k));
    return 0.5 * (std::pow(a + 1.0, h2) + std::pow(std::abs(a - 1.0), h2) -
                  2.0 * std::pow(a, h2));
}

namespace {

std::mutex g_fftw_mutex;

const GaussLegendre& cached_gl(int n) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, GaussLegendre(n)).first;
    return it->second;
}

// fGn sample of length n on the unit grid via Davies-Harte circulant
// embedding. Returns false if the embedding is not nonnegative definite.
bool sample_fgn_circulant(const HurstParam& H, std::size_t n,
                          std::uint64_t seed, std::vector<double>& out) {
    const std::size_t m = 2 * n;
    std::vector<std::complex<double>> buf(m);
    for (std::size_t j = 0; j <= n; ++j)
        buf[j] = fgn_autocovariance(static_cast<std::int64_t>(j), H);
    for (std::size_t j = n + 1; j < m; ++j) buf[j] = buf[m - j];

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(m),
                                reinterpret_cast<fftw_complex*>(buf.data()),
                                reinterpret_cast<fftw_complex*>(buf.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);

    std::vector<double> lambda(m);
    double lam_max = 0.0, lam_min = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        lambda[k] = buf[k].real();
        lam_max = std::max(lam_max, lambda[k]);
        lam_min = std::min(lam_min, lambda[k]);
    }
    if (lam_min < -1e-10 * lam_max) {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(plan);
        return false;
    }
    for (auto& l : lambda) l = std::max(l, 0.0);

    GaussStream g(seed);
    buf[0] = std::sqrt(lambda[0]) * g();
    for (std::size_t k = 1; k < n; ++k) {
        const double re = g(), im = g();
        const double s = std::sqrt(0.5 * lambda[k]);
        buf[k] = {s * re, s * im};
        buf[m - k] = std::conj(buf[k]);
    }
    buf[n] = std::sqrt(lambda[n]) * g();

    fftw_execute(plan);  // same plan, same buffer
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(plan);
    }

    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    out.resize(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = buf[j].real() * norm;
    return true;
}

void sample_fgn_cholesky(const HurstParam& H, std::size_t n,
                         std::uint64_t seed, std::vector<double>& out) {
    if (n > 8192)
        throw std::runtime_error(
            "Cholesky fBm synthesis limited to n <= 8192 increments");
    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cov(i, j) = fgn_autocovariance(
                static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j), H);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("increment covariance not positive definite");
    GaussStream g(seed);
    Eigen::VectorXd z(n);
    for (std::size_t i = 0; i < n; ++i) z(i) = g();
    Eigen::VectorXd x = llt.matrixL() * z;
    out.assign(x.data(), x.data() + n);
}

}  // namespace

FbmPath generate_fbm(const HurstParam& H, std::size_t n, double dt,
                     std::uint64_t seed, FbmMethod method) {
    if (n < 1) throw std::domain_error("generate_fbm: n must be >= 1");
    if (!(dt > 0.0)) throw std::domain_error("generate_fbm: dt must be > 0");

    std::vector<double> incr;
    FbmMethod used = method;
    if (method == FbmMethod::CirculantEmbedding) {
        if (!sample_fgn_circulant(H, n, seed, incr)) {
            sample_fgn_cholesky(H, n, seed, incr);
            used = FbmMethod::Cholesky;
        }
    } else {
        sample_fgn_cholesky(H, n, seed, incr);
    }

    FbmPath path{H, dt, std::vector<double>(n + 1, 0.0), seed, used};
    const double scale = std::pow(dt, H.value());
    for (std::size_t i = 0; i < n; ++i)
        path.values[i + 1] = path.values[i] + scale * incr[i];
    return path;
}

FbmPath rescale_selfsimilar(const FbmPath& path, double a) {
    if (!(a > 0.0)) throw std::domain_error("rescale_selfsimilar: a must be > 0");
    FbmPath out = path;
    out.dt = path.dt / a;
    const double s = std::pow(a, -path.hurst.value());
    for (auto& v : out.values) v *= s;
    return out;
}

FbmKernel::FbmKernel(const HurstParam& H, int quad_points)
    : H_(H), quad_points_(quad_points), c_H_(1.0) {
    if (H.value() <= 0.5)
        throw std::runtime_error("FbmKernel: representation requires H > 1/2");
    if (quad_points < 2) throw std::domain_error("FbmKernel: quad_points >= 2");
    // Calibrate c_H against Var b(1) = 1; the closed form is never used.
    const int outer = std::min(quad_points, 512);
    const auto& gl = cached_gl(outer);
    const double recon = gl.integrate(0.0, 1.0, [this](double r) {
        const double k = kernel_unit(1.0, r);
        return k * k;
    });
    c_H_ = 1.0 / std::sqrt(recon);
}

double FbmKernel::kernel_unit(double t, double r) const {
    // u = r + v^2 removes the (u-r)^{H-3/2} endpoint singularity
    const double h = H_.value();
    const double vmax = std::sqrt(t - r);
    const auto& gl = cached_gl(quad_points_);
    return 2.0 * gl.integrate(0.0, vmax, [&](double v) {
        return std::pow((r + v * v) / r, h - 0.5) * std::pow(v, 2.0 * h - 2.0);
    });
}

double FbmKernel::operator()(double t, double r) const {
    if (!(r > 0.0) || r >= t)
        throw std::domain_error("FbmKernel: requires 0 < r < t");
    return c_H_ * kernel_unit(t, r);
}

double FbmKernel::reconstruct_covariance(double s, double t) const {
    const double up = std::min(s, t);
    const int outer = std::min(quad_points_, 512);
    const auto& gl = cached_gl(outer);
    const double c2 = c_H_ * c_H_;
    return c2 * gl.integrate(0.0, up, [&](double r) {
        return kernel_unit(s, r) * kernel_unit(t, r);
    });
}

double QFbmField::trace() const {
    double s = 0.0;
    for (double q : eigenvalues_q) s += q;
    return s;
}

std::uint64_t QFbmField::fingerprint() const {
    std::uint64_t h = mix64(seed);
    for (const auto& p : component_paths)
        for (double v : p.values) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof bits);
            h = mix64(h ^ bits);
        }
    return h;
}

QFbmField generate_qfbm(const HurstParam& H, std::size_t K,
                        const Spectrum& spectrum, std::size_t n, double dt,
                        std::uint64_t seed) {
    if (K < 1) throw std::domain_error("generate_qfbm: K must be >= 1");
    std::vector<double> q(K);
    if (spectrum.kind == Spectrum::Kind::PowerLaw) {
        if (!(spectrum.rho > 1.0))
            throw std::domain_error(
                "generate_qfbm: power-law exponent rho <= 1 violates the "
                "trace-class requirement");
        for (std::size_t k = 0; k < K; ++k)
            q[k] = std::pow(static_cast<double>(k + 1), -spectrum.rho);
    } else {
        if (spectrum.explicit_q.size() != K)
            throw std::domain_error("generate_qfbm: explicit spectrum size != K");
        q = spectrum.explicit_q;
        for (double v : q)
            if (v < 0.0) throw std::domain_error("generate_qfbm: q_k < 0");
    }

    QFbmField field{H, dt, std::move(q), {}, seed};
    field.component_paths.reserve(K);
    for (std::size_t k = 0; k < K; ++k)
        field.component_paths.push_back(
            generate_fbm(H, n, dt, hash64(seed, k)));
    return field;
}

void write_fbm_binary(const FbmPath& path, const std::string& filename) {
    std::ofstream f(filename, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + filename);
    const char magic[4] = {'A', 'E', 'Q', '1'};
    f.write(magic, 4);
    const double h = path.hurst.value();
    const std::uint64_t n = path.steps();
    const std::uint8_t m = static_cast<std::uint8_t>(path.method);
    f.write(reinterpret_cast<const char*>(&h), 8);
    f.write(reinterpret_cast<const char*>(&path.dt), 8);
    f.write(reinterpret_cast<const char*>(&n), 8);
    f.write(reinterpret_cast<const char*>(&path.seed), 8);
    f.write(reinterpret_cast<const char*>(&m), 1);
    f.write(reinterpret_cast<const char*>(path.values.data()),
            static_cast<std::streamsize>(path.values.size() * 8));
}

FbmPath read_fbm_binary(const std::string& filename) {
    std::ifstream f(filename, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + filename);
    char magic[4];
    f.read(magic, 4);
    if (std::memcmp(magic, "AEQ1", 4) != 0)
        throw std::runtime_error(filename + ": bad magic");
    double h = 0.0, dt = 0.0;
    std::uint64_t n = 0, seed = 0;
    std::uint8_t m = 0;
    f.read(reinterpret_cast<char*>(&h), 8);
    f.read(reinterpret_cast<char*>(&dt), 8);
    f.read(reinterpret_cast<char*>(&n), 8);
    f.read(reinterpret_cast<char*>(&seed), 8);
    f.read(reinterpret_cast<char*>(&m), 1);
    FbmPath path{HurstParam(h), dt, std::vector<double>(n + 1), seed,
                 static_cast<FbmMethod>(m)};
    f.read(reinterpret_cast<char*>(path.values.data()),
           static_cast<std::streamsize>(path.values.size() * 8));
    if (!f) throw std::runtime_error(filename + ": truncated path file");
    return path;
}

void write_fbm_csv(const FbmPath& path, const std::string& filename) {
    std::ofstream f(filename);
    if (!f) throw std::runtime_error("cannot open " + filename);
    f << "t,value\n";
    char line[64];
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", path.time(i),
                      path.values[i]);
        f << line;
    }
}

}  // namespace ampeq
