#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ampeq {

// Hurst index, open interval (0,1). H=1 is the degenerate line process
// and is rejected together with the endpoints.
class HurstParam {
public:
    explicit HurstParam(double h) : value_(h) {
        if (!(h > 0.0 && h < 1.0))
            throw std::domain_error("Hurst parameter must lie in (0,1)");
    }
    double value() const { return value_; }

private:
    double value_;
};

enum class FbmMethod : std::uint8_t { CirculantEmbedding = 0, Cholesky = 1 };

// Sampled scalar fBm trajectory on the uniform grid t_i = i*dt.
struct FbmPath {
    HurstParam hurst;
    double dt = 0.0;
    std::vector<double> values;  // length n+1, values[0] == 0
    std::uint64_t seed = 0;
    FbmMethod method = FbmMethod::CirculantEmbedding;

    std::size_t steps() const { return values.size() - 1; }
    double time(std::size_t i) const { return dt * static_cast<double>(i); }
};

// E[b(t) b(s)] = (t^2H + s^2H - |t-s|^2H) / 2
double fbm_covariance(double t, double s, const HurstParam& H);

// Increment autocovariance of unit-step fractional Gaussian noise,
// gamma(k) = (|k+1|^2H + |k-1|^2H - 2|k|^2H)/2.
double fgn_autocovariance(std::int64_t k, const HurstParam& H);

// Volterra kernel K(t,r) of the covariance factorization, valid for
// H > 1/2 only. c_H is calibrated once per (H, quad_points) so that the
// reconstructed variance at t=1 equals 1; the endpoint singularity
// (u-r)^{H-3/2} is removed by the substitution u = r + v^2.
class FbmKernel {
public:
    FbmKernel(const HurstParam& H, int quad_points);

    double operator()(double t, double r) const;
    // int_0^min(s,t) K(s,r) K(t,r) dr, numeric reconstruction of the covariance
    double reconstruct_covariance(double s, double t) const;
    double c_H() const { return c_H_; }

private:
    double kernel_unit(double t, double r) const;  // K with c_H = 1

    HurstParam H_;
    int quad_points_;
    double c_H_;
};

// Exact-covariance synthesis of an fBm path. Circulant embedding of the
// fGn autocovariance with an FFT; if the embedding has an eigenvalue
// below -1e-10 * max it silently falls back to a Cholesky factor of the
// exact increment covariance (the method used is recorded in the path).
FbmPath generate_fbm(const HurstParam& H, std::size_t n, double dt,
                     std::uint64_t seed,
                     FbmMethod method = FbmMethod::CirculantEmbedding);

// Representative of a^{-H} b(a t): the sampled path of the time-sped
// process rescaled back to unit law, usable in distributional tests.
FbmPath rescale_selfsimilar(const FbmPath& path, double a);

struct Spectrum {
    enum class Kind { PowerLaw, Explicit } kind = Kind::PowerLaw;
    double rho = 2.0;               // q_k = k^-rho, k = 1..K
    std::vector<double> explicit_q;  // used when kind == Explicit

    static Spectrum power_law(double rho_) {
        Spectrum s;
        s.kind = Kind::PowerLaw;
        s.rho = rho_;
        return s;
    }
    static Spectrum explicit_list(std::vector<double> q) {
        Spectrum s;
        s.kind = Kind::Explicit;
        s.explicit_q = std::move(q);
        return s;
    }
};

// Truncated trace-class Q-fBm: K independent scalar fBm paths, mode k
// weighted by sqrt(q_k). Component seeds are hash64(seed, k).
struct QFbmField {
    HurstParam hurst;
    double dt = 0.0;
    std::vector<double> eigenvalues_q;  // q_1..q_K
    std::vector<FbmPath> component_paths;
    std::uint64_t seed = 0;

    std::size_t modes() const { return component_paths.size(); }
    std::size_t steps() const { return component_paths.front().steps(); }
    double trace() const;
    // order-independent fingerprint of the sampled noise, used to assert
    // that coupled solvers really share one path
    std::uint64_t fingerprint() const;
};

QFbmField generate_qfbm(const HurstParam& H, std::size_t K,
                        const Spectrum& spectrum, std::size_t n, double dt,
                        std::uint64_t seed);

// Binary path format: little-endian header {magic "AEQ1", H f64, dt f64,
// n u64, seed u64, method u8} then n+1 f64 values.
void write_fbm_binary(const FbmPath& path, const std::string& filename);
FbmPath read_fbm_binary(const std::string& filename);
void write_fbm_csv(const FbmPath& path, const std::string& filename);

}  // namespace ampeq
