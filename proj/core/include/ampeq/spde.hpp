#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ampeq/fbm.hpp"
#include "ampeq/spectral.hpp"

namespace ampeq {

// Time grids for one (T0, eps) experiment. The fast grid covers
// [0, T0*eps^-2] with n_fast a multiple of n_slow so that slow nodes
// T_j = j*dT land exactly on fast nodes (pathwise coupling needs this).
struct GridSpec {
    double T0 = 1.0;
    double eps = 0.1;
    std::size_t n_slow = 1024;
    std::size_t n_fast = 4096;
    double dT = 0.0;
    double dt_fast = 0.0;
    std::size_t fast_per_slow = 4;

    double fast_horizon() const { return T0 / (eps * eps); }
};

// dt_fast = min(0.01, T0*eps^-2 / 2^12), rounded so n_fast is a multiple
// of n_slow.
GridSpec choose_grids(double T0, double eps, std::size_t n_slow = 1024,
                      double dt_cap = 0.01, std::size_t min_fast = 4096);

// Per-step Q-fBm increment embedded into the operator eigenbasis.
class NoiseIncrements {
public:
    NoiseIncrements(const SpectralSystem& sys, const QFbmField& noise);
    // increment over [t_m, t_{m+1}] as a spectral Field
    Field increment(std::size_t m) const;
    // W(t_m) itself (path values, not increments)
    Field value(std::size_t m) const;

private:
    const SpectralSystem& sys_;
    const QFbmField& noise_;
};

struct SpdeRun {
    GridSpec grid;
    HurstParam hurst{0.5};
    Field u0;
    std::size_t stride = 1;
    std::vector<std::size_t> snapshot_idx;  // fast indices of the snapshots
    std::vector<Field> trajectory;          // trajectory[0] == u0
    bool blew_up = false;
    double blowup_time = 0.0;
    std::uint64_t noise_fingerprint = 0;
    std::uint64_t seed = 0;
};

inline std::size_t default_stride(std::size_t n_fast,
                                  std::size_t max_snapshots = 1 << 14) {
    return (n_fast + max_snapshots - 1) / max_snapshots;
}

// Exponential Euler on the mild form: one step is
//   u <- e^{dt L}[u + dt (eps^2 A u + F(u))] + eps^{2H+1} e^{dt L} dW.
// Noise increments are exact fBm path differences. A blow-up guard halts
// at ||u|| > 1e6 and records the hitting time instead of throwing.
SpdeRun solve_spde(const SpectralSystem& sys, const QFbmField& noise,
                   const GridSpec& grid, const Field& u0, std::size_t stride);

// Convenience overload that synthesizes its own noise path.
SpdeRun solve_spde(const SpectralSystem& sys, const HurstParam& H, double eps,
                   double T0, const Field& u0, std::uint64_t seed,
                   std::size_t stride, std::size_t noise_modes = 32,
                   double rho = 2.0);

// Streaming scan of W_L(t_m) = e^{dt L}(W_L(t_{m-1}) + dW_{m-1}) over the
// fast grid; visitor receives (m, W_L(t_m)) for m = 0..n.
void stochastic_convolution_scan(
    const SpectralSystem& sys, const QFbmField& noise,
    const std::function<void(std::size_t, const Field&)>& visit);

// Convolution sampled at the given (sorted) fast indices.
std::vector<Field> stochastic_convolution(const SpectralSystem& sys,
                                          const QFbmField& noise,
                                          const std::vector<std::size_t>& at);

}  // namespace ampeq
