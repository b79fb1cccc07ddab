#pragma once

#include <cstddef>
#include <vector>

#include "ampeq/fbm.hpp"
#include "ampeq/spectral.hpp"

namespace ampeq {

// Uniformly sampled scalar function on [0, dt*(n-1)].
struct SampledFunction {
    double dt = 0.0;
    std::vector<double> values;

    double horizon() const { return dt * static_cast<double>(values.size() - 1); }
};

// Discrete C^alpha norm: sup_i |f_i| + max over grid pairs of
// |f_j - f_i| / (t_j - t_i)^alpha. All O(n^2) pairs for n <= 2^11,
// dyadic-gap subsampling (gaps 1,2,4,...) above.
double holder_norm(const SampledFunction& f, double alpha);
double holder_seminorm(const SampledFunction& f, double alpha);
double holder_norm(const std::vector<Field>& f, double dt, double alpha);

// t -> int_0^t e^{(t-s) lambda eps^-2} f(s) ds; midpoint-filtered
// recursion, exact in the semigroup factor. The output grid refines the
// input grid as needed to resolve the eps^2/|lambda| kernel scale
// (f is linearly interpolated onto the substeps).
SampledFunction epsilon_convolution(const SampledFunction& f, double lambda,
                                    double eps);

struct RatioReport {
    double exponent = 0.0;        // the epsilon power tested against
    std::vector<double> eps_grid;
    std::vector<double> norms;    // measured Holder norms
    std::vector<double> ratios;   // norms[i] / eps^exponent
    double max_over_median = 0.0;
    double fitted_slope = 0.0;    // log-log slope of norms vs eps
    bool pass = false;            // max/median <= 2.5
};

// Convolution scaling checks against a dyadic epsilon grid (scalar
// stable mode lambda < 0). The measured alpha-Holder norm divided by
// the predicted epsilon power must stay epsilon-uniformly bounded.
RatioReport check_lemma_A1(double alpha, const SampledFunction& f,
                           const std::vector<double>& eps_grid,
                           double lambda = -1.0);
// requires f(0) = 0
RatioReport check_lemma_A2(double alpha, const SampledFunction& f,
                           const std::vector<double>& eps_grid,
                           double lambda = -1.0);
// requires gamma <= alpha < 1 and 0 <= zeta < 2(1-alpha)/(1-gamma);
// zeta <= 0 selects the default 0.9 * 2(1-alpha)/(1-gamma)
RatioReport check_lemma_A3(double alpha, double gamma, double zeta,
                           const SampledFunction& f,
                           const std::vector<double>& eps_grid,
                           double lambda = -1.0);

// Deterministic test profiles for the scaling checks
SampledFunction profile_continuous(std::size_t n);          // cos, f(0) != 0
SampledFunction profile_smooth_zero(std::size_t n);         // sin(pi t)
SampledFunction profile_weierstrass(std::size_t n, double gamma);  // C^gamma, f(0)=0

// Both sides of the convolution identity
//   int_0^t P_s W_L(tau eps^-2) dtau = int_0^t e^{(t-s)L eps^-2} P_s W(s eps^-2) ds
// on the shared noise path; returns the relative sup deviation over the
// slow grid. The noise grid is read as the fast grid s*eps^-2.
double identity_l46_deviation(const SpectralSystem& sys,
                              const QFbmField& noise, double eps);

// Coarsen a path/field by keeping every factor-th node (refinement studies
// on one fixed realization).
QFbmField subsample_noise(const QFbmField& noise, std::size_t factor);

struct YoungCheck {
    double lhs = 0.0;
    double rhs_a = 0.0;  // ||a||_{C^beta'}^2
    double rhs_z = 0.0;  // ||Z||_{C^alpha'}
    double ratio = 0.0;  // lhs / (rhs_a * rhs_z)
};

// Pathwise Young-estimate factors for
//   ||int F_c(a,a, dZ)|| <= C ||a||^2_{C^beta'} ||Z||_{C^alpha'},
// where Z(tau) = int_0^tau P_s W_L(s eps^-2) ds. Requires
// alpha' + beta' > 1.
YoungCheck young_bound_check(const SpectralSystem& sys,
                             const std::vector<Field>& a_slow,
                             const QFbmField& noise, double eps,
                             double alpha_p, double beta_p);

}  // namespace ampeq
