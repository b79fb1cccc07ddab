#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace ampeq {

// Spatial state as Fourier coefficients over modes -N..N on [0,2pi].
// Real fields keep the Hermitian symmetry coeff(-k) = conj(coeff(k)).
// The X-norm is the spatial L2 norm: ||f|| = sqrt(2*pi) * l2(coeffs).
struct Field {
    int nmodes = 0;  // N
    std::vector<std::complex<double>> coeffs;  // size 2N+1, index k+N

    Field() = default;
    explicit Field(int N) : nmodes(N), coeffs(2 * N + 1, 0.0) {}

    std::complex<double>& at(int k) { return coeffs[k + nmodes]; }
    const std::complex<double>& at(int k) const { return coeffs[k + nmodes]; }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

double norm(const Field& f);                       // X-norm
double inner(const Field& a, const Field& b);      // real L2 inner product
bool hermitian_symmetric(const Field& f, double tol = 1e-12);

enum class Preset { LaplacianPeriodic, SwiftHohenberg };

// Fourier-diagonal model operator L on [0,2pi] with a nontrivial kernel,
// spectral gap mu on the stable complement, perturbation A = nu*Id and
// the cubic nonlinearity F(u,v,w) = -u*v*w.
class SpectralSystem {
public:
    SpectralSystem(Preset preset, int modes, double nu);

    Preset preset() const { return preset_; }
    int modes() const { return modes_; }
    double nu() const { return nu_; }
    double mu() const { return mu_; }
    double eigenvalue(int k) const { return eigenvalues_[k + modes_]; }
    const std::vector<int>& kernel_modes() const { return kernel_idx_; }
    int kernel_dim() const;  // real dimension of N

    Field project_c(const Field& f) const;
    Field project_s(const Field& f) const;
    Field semigroup(const Field& f, double t) const;
    Field apply_A(const Field& f) const;  // nu * f (or diagonal multiplier)
    double frac_power_norm(const Field& f, double alpha) const;

    // Dealiased pseudospectral trilinear map F(u,v,w) = -u*v*w
    Field apply_F(const Field& u, const Field& v, const Field& w) const;
    Field apply_F(const Field& u) const { return apply_F(u, u, u); }

    // Orthonormal noise basis: index 0 -> 1/sqrt(2pi); then for each
    // wavenumber k >= 1 the pair cos(kx)/sqrt(pi), sin(kx)/sqrt(pi).
    Field noise_basis(std::size_t j) const;
    void add_noise_basis(Field& f, std::size_t j, double amount) const;
    double eigenvalue_of_noise_basis(std::size_t j) const;

    // Optional general diagonal A (exercises bounded A beyond nu*Id)
    void set_diagonal_A(std::vector<double> multipliers);

private:
    Preset preset_;
    int modes_;
    double nu_;
    double mu_;
    std::vector<double> eigenvalues_;
    std::vector<int> kernel_idx_;
    std::vector<double> diag_A_;  // empty -> A = nu*Id
};

struct SignConditionReport {
    bool ok = true;
    int trials = 0;
    int violations_f_sign = 0;   // <F_c(v),v> < 0
    int violations_f1 = 0;       // <F_c(v,v,w),w> < 0
    double eta = 0.0;            // fitted coercivity constant
    double C_eta = 0.0;          // fitted companion constant
    std::string summary() const;
};

// Randomized verification of the cubic sign conditions on the kernel.
SignConditionReport check_sign_conditions(const SpectralSystem& sys,
                                          int trials, std::uint64_t seed);

void write_field_csv(const Field& f, const std::string& filename);
Field read_field_csv(const std::string& filename);

}  // namespace ampeq
