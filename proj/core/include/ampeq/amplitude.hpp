#pragma once

#include <vector>

#include "ampeq/spde.hpp"

namespace ampeq {

// Amplitude path a(T) on the kernel N over the slow grid T_j = j*dT,
// together with the rescaled driving noise b(T) = eps^{2H} P_c W(T eps^-2).
struct AmplitudePath {
    double dT = 0.0;
    std::vector<Field> values;  // a(T_j), supported on kernel modes
    std::vector<Field> b_path;  // b(T_j), b_path[0] == 0

    // linear interpolation of a at slow time T
    Field at_time(double T) const;
};

// Fractional OU path on S sampled at selected fast indices.
struct FouPath {
    std::vector<std::size_t> indices;
    std::vector<Field> values;  // psi_s(t_m) = e^{t_m L} psi_s0 + P_s W_L(t_m)
    Field psi_s0;
    double sup_norm = 0.0;  // over the full fast grid, not just the samples
};

// b(T_j) read off the shared noise path at aligned fast indices.
// Throws if the slow grid does not align with the noise grid.
std::vector<Field> rescaled_noise_b(const SpectralSystem& sys,
                                    const QFbmField& noise, double eps,
                                    std::size_t n_slow);

// Integral form of the amplitude equation, explicit in the drift and
// exact in the noise: a_{j+1} = a_j + dT*(A_c a + F_c(a)) + (b_{j+1}-b_j),
// with RK4 substeps for the drift, halving until the per-step change is
// below 1e-8.
AmplitudePath solve_amplitude(const SpectralSystem& sys,
                              const std::vector<Field>& b, const Field& a0,
                              double dT);

// psi_s at the requested fast indices (plus its sup norm over the whole
// grid) computed from the shared noise path.
FouPath solve_fou(const SpectralSystem& sys, const QFbmField& noise,
                  const Field& psi_s0, const std::vector<std::size_t>& at);

// psi(t_m) = eps * a(eps^2 t_m) + eps^{2H+1} psi_s(t_m) at the fou
// sample indices; a is linearly interpolated to intermediate fast times.
std::vector<Field> assemble_psi(const AmplitudePath& a_path,
                                const FouPath& fou, double eps, double H,
                                double dt_fast);

}  // namespace ampeq
