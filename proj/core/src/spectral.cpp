#include "ampeq/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "ampeq/rng.hpp"

namespace ampeq {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

std::mutex g_fftw_plan_mutex;

// Per-thread FFT workspace for one physical grid size.
struct FftWork {
    int M;
    std::vector<std::complex<double>> buf;
    fftw_plan fwd, bwd;

    explicit FftWork(int M_) : M(M_), buf(M_) {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        fwd = fftw_plan_dft_1d(M, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(M, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftWork() {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    FftWork(const FftWork&) = delete;
    FftWork& operator=(const FftWork&) = delete;
};

FftWork& work_for(int M) {
    thread_local std::map<int, std::unique_ptr<FftWork>> cache;
    auto& slot = cache[M];
    if (!slot) slot = std::make_unique<FftWork>(M);
    return *slot;
}

// coeffs (-N..N) -> physical samples on M points, u(x_j) = sum c_k e^{ikx_j}
void to_physical(const Field& f, FftWork& w,
                 std::vector<std::complex<double>>& phys) {
    const int N = f.nmodes, M = w.M;
    std::fill(w.buf.begin(), w.buf.end(), std::complex<double>(0.0));
    for (int k = -N; k <= N; ++k) w.buf[(k + M) % M] = f.at(k);
    fftw_execute(w.bwd);
    phys = w.buf;
}

}  // namespace

Field& Field::operator+=(const Field& o) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
}
Field& Field::operator-=(const Field& o) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
}
Field& Field::operator*=(double s) {
    for (auto& c : coeffs) c *= s;
    return *this;
}
Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

double norm(const Field& f) {
    double s = 0.0;
    for (const auto& c : f.coeffs) s += std::norm(c);
    return std::sqrt(kTwoPi * s);
}

double inner(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        s += (a.coeffs[i] * std::conj(b.coeffs[i])).real();
    return kTwoPi * s;
}

bool hermitian_symmetric(const Field& f, double tol) {
    for (int k = 1; k <= f.nmodes; ++k)
        if (std::abs(f.at(-k) - std::conj(f.at(k))) > tol) return false;
    return std::abs(f.at(0).imag()) <= tol;
}

SpectralSystem::SpectralSystem(Preset preset, int modes, double nu)
    : preset_(preset), modes_(modes), nu_(nu) {
    if (modes < 2) throw std::domain_error("SpectralSystem: modes must be >= 2");
    eigenvalues_.resize(2 * modes + 1);
    for (int k = -modes; k <= modes; ++k) {
        double lam;
        if (preset == Preset::LaplacianPeriodic) {
            lam = -static_cast<double>(k) * k;
        } else {
            const double d = 1.0 - static_cast<double>(k) * k;
            lam = -d * d;
        }
        eigenvalues_[k + modes] = lam;
    }
    if (preset == Preset::LaplacianPeriodic) {
        kernel_idx_ = {0};
    } else {
        kernel_idx_ = {-1, 1};
        eigenvalues_[-1 + modes] = 0.0;  // exact zeros on the kernel
        eigenvalues_[1 + modes] = 0.0;
    }
    mu_ = 1e300;
    for (int k = -modes; k <= modes; ++k) {
        bool in_kernel = false;
        for (int j : kernel_idx_) in_kernel |= (j == k);
        if (!in_kernel) mu_ = std::min(mu_, -eigenvalues_[k + modes]);
    }
}

int SpectralSystem::kernel_dim() const {
    return static_cast<int>(kernel_idx_.size());
}

Field SpectralSystem::project_c(const Field& f) const {
    Field out(f.nmodes);
    for (int k : kernel_idx_) out.at(k) = f.at(k);
    return out;
}

Field SpectralSystem::project_s(const Field& f) const {
    Field out = f;
    for (int k : kernel_idx_) out.at(k) = 0.0;
    return out;
}

Field SpectralSystem::semigroup(const Field& f, double t) const {
    if (t < 0.0) throw std::domain_error("semigroup: t must be >= 0");
    Field out = f;
    for (int k = -f.nmodes; k <= f.nmodes; ++k)
        out.at(k) *= std::exp(t * eigenvalue(k));
    return out;
}

Field SpectralSystem::apply_A(const Field& f) const {
    Field out = f;
    if (diag_A_.empty()) {
        out *= nu_;
    } else {
        for (int k = -f.nmodes; k <= f.nmodes; ++k)
            out.at(k) *= diag_A_[k + f.nmodes];
    }
    return out;
}

void SpectralSystem::set_diagonal_A(std::vector<double> multipliers) {
    if (multipliers.size() != static_cast<std::size_t>(2 * modes_ + 1))
        throw std::domain_error("set_diagonal_A: wrong multiplier count");
    diag_A_ = std::move(multipliers);
}

double SpectralSystem::frac_power_norm(const Field& f, double alpha) const {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::domain_error("frac_power_norm: alpha must be in [0,1)");
    double s = 0.0;
    for (int k = -f.nmodes; k <= f.nmodes; ++k)
        s += std::pow(1.0 + std::abs(eigenvalue(k)), 2.0 * alpha) *
             std::norm(f.at(k));
    return std::sqrt(kTwoPi * s);
}

Field SpectralSystem::apply_F(const Field& u, const Field& v,
                              const Field& w) const {
    const int N = u.nmodes;
    // 2x zero padding: alias-free for the cubic (product modes reach 3N,
    // wrapped images land below -N-1 and are discarded by truncation)
    const int M = 4 * N + 2;
    FftWork& wk = work_for(M);

    std::vector<std::complex<double>> pu, pv, pw;
    to_physical(u, wk, pu);
    to_physical(v, wk, pv);
    to_physical(w, wk, pw);

    for (int j = 0; j < M; ++j) wk.buf[j] = -pu[j] * pv[j] * pw[j];
    fftw_execute(wk.fwd);

    Field out(N);
    const double inv = 1.0 / M;
    for (int k = -N; k <= N; ++k) out.at(k) = wk.buf[(k + M) % M] * inv;
    return out;
}

Field SpectralSystem::noise_basis(std::size_t j) const {
    Field f(modes_);
    add_noise_basis(f, j, 1.0);
    return f;
}

void SpectralSystem::add_noise_basis(Field& f, std::size_t j,
                                     double amount) const {
    const double inv_sqrt_2pi = 1.0 / std::sqrt(kTwoPi);
    const double inv_2sqrt_pi = 0.5 / std::sqrt(kTwoPi / 2.0);
    if (j == 0) {
        f.at(0) += amount * inv_sqrt_2pi;
        return;
    }
    const int k = static_cast<int>((j + 1) / 2);
    if (k > modes_)
        throw std::domain_error("noise basis index beyond spectral truncation");
    if (j % 2 == 1) {  // cos(kx)/sqrt(pi)
        f.at(k) += amount * inv_2sqrt_pi;
        f.at(-k) += amount * inv_2sqrt_pi;
    } else {  // sin(kx)/sqrt(pi)
        f.at(k) += std::complex<double>(0.0, -amount * inv_2sqrt_pi);
        f.at(-k) += std::complex<double>(0.0, amount * inv_2sqrt_pi);
    }
}

double SpectralSystem::eigenvalue_of_noise_basis(std::size_t j) const {
    const int k = (j == 0) ? 0 : static_cast<int>((j + 1) / 2);
    return eigenvalue(k);
}

namespace {

// Random real field supported on the kernel of L
Field random_kernel_field(const SpectralSystem& sys, GaussStream& g) {
    Field f(sys.modes());
    if (sys.preset() == Preset::LaplacianPeriodic) {
        f.at(0) = g();
    } else {
        const double a = g(), b = g();  // a*cos + b*sin
        f.at(1) = std::complex<double>(0.5 * a, -0.5 * b);
        f.at(-1) = std::conj(f.at(1));
    }
    return f;
}

}  // namespace

SignConditionReport check_sign_conditions(const SpectralSystem& sys,
                                          int trials, std::uint64_t seed) {
    if (trials < 1) throw std::domain_error("check_sign_conditions: trials >= 1");
    GaussStream g(seed);
    SignConditionReport rep;
    rep.trials = trials;

    double min_ratio = 1e300;
    struct Sample {
        double lhs, phi4, v4;
    };
    std::vector<Sample> mixed;
    mixed.reserve(trials);

    for (int i = 0; i < trials; ++i) {
        const Field v = random_kernel_field(sys, g);
        const Field w = random_kernel_field(sys, g);
        const Field phi = random_kernel_field(sys, g);
        const double nv = norm(v), nw = norm(w), nphi = norm(phi);
        if (nv < 1e-12 || nw < 1e-12) continue;

        const double s1 = inner(sys.project_c(sys.apply_F(v)), v);
        if (!(s1 < 0.0)) ++rep.violations_f_sign;
        min_ratio = std::min(min_ratio, -s1 / (nv * nv * nv * nv));

        const double s2 = inner(sys.project_c(sys.apply_F(v, v, w)), w);
        if (!(s2 < 0.0)) ++rep.violations_f1;

        const double s3 = inner(sys.project_c(sys.apply_F(phi + v)), v);
        mixed.push_back({s3, nphi * nphi * nphi * nphi, nv * nv * nv * nv});
    }

    rep.eta = 0.1 * min_ratio;
    double c_eta = 0.0;
    for (const auto& s : mixed) {
        const double need = s.lhs + rep.eta * s.v4;
        if (need > 0.0 && s.phi4 > 1e-14)
            c_eta = std::max(c_eta, need / s.phi4);
    }
    rep.C_eta = c_eta;
    rep.ok = (rep.violations_f_sign == 0 && rep.violations_f1 == 0 &&
              rep.eta > 0.0);
    return rep;
}

std::string SignConditionReport::summary() const {
    std::ostringstream os;
    os << "sign_conditions ok=" << (ok ? 1 : 0) << " trials=" << trials
       << " viol_f_sign=" << violations_f_sign << " viol_f1=" << violations_f1
       << " eta=" << eta << " C_eta=" << C_eta;
    return os.str();
}

void write_field_csv(const Field& f, const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out << "mode,re,im\n";
    char line[96];
    for (int k = -f.nmodes; k <= f.nmodes; ++k) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", k,
                      f.at(k).real(), f.at(k).imag());
        out << line;
    }
}

Field read_field_csv(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error("cannot open " + filename);
    std::string header;
    std::getline(in, header);
    std::vector<std::pair<int, std::complex<double>>> rows;
    int kmax = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int k;
        double re, im;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf", &k, &re, &im) != 3)
            throw std::runtime_error(filename + ": bad field row: " + line);
        rows.emplace_back(k, std::complex<double>(re, im));
        kmax = std::max(kmax, std::abs(k));
    }
    Field f(kmax);
    for (const auto& [k, c] : rows) f.at(k) = c;
    return f;
}

}  // namespace ampeq
