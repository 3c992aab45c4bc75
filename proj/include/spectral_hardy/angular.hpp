#pragma once

// First eigenvalue mu_1(a) of the weighted angular problem on the upper
// half-sphere, and the Gamma-quotient map lambda(alpha).
//
// Angular variable: u = theta_1 in [0,1] is the height above the equator
// (u = 0 on the equator, u = 1 at the pole).  For N = 2 the equator is a
// circle parametrised by tau in [0, 2 pi).

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace spectral_hardy::angular {

struct SpectralConfig {
    /// Radial Galerkin functions per angular mode (two of them carry the
    /// u^{2s} equator singularity).
    std::size_t basis_size = 64;
    /// Gauss-Jacobi nodes per rule; 0 selects 2 * basis_size + 8.
    std::size_t quad_points = 0;
    /// Highest Fourier mode kept for N = 2; 0 selects a default from the
    /// coupling's bandwidth.
    std::size_t fourier_modes = 0;
    double tolerance = 1e-8;

    /// Throws RangeError if the invariants do not hold.
    void validate() const;
    std::size_t effective_quad_points() const;
};

/// Equator coupling a: either a constant, or (N = 2 only) a real
/// trigonometric polynomial a(tau) = sum_k c_k e^{i k tau} with c_{-k} = conj(c_k).
class CouplingDescriptor {
public:
    static CouplingDescriptor constant(double value);
    /// Coefficients keyed by k.  Missing negative (or positive) partners are
    /// filled in by Hermitian symmetry; inconsistent pairs are rejected.
    static CouplingDescriptor fourier(const std::map<int, std::complex<double>>& coeffs);
    /// Plain text, one "k re im" triple per line; '#' starts a comment.
    static CouplingDescriptor load_fourier_file(const std::string& path);

    bool is_constant() const noexcept { return constant_; }
    /// Constant value, or the mean c_0 for a Fourier coupling.
    double mean() const;
    int bandwidth() const noexcept;
    std::complex<double> coefficient(int k) const;
    double evaluate(double tau) const;
    std::string describe() const;

private:
    bool constant_ = true;
    double value_ = 0.0;
    std::map<int, std::complex<double>> coeffs_;
};

struct Mu1Result {
    double mu1 = 0.0;
    /// Galerkin coefficients, mode-major for N = 2.
    std::vector<double> coeffs;
    /// Equator value of psi_1 (its tau-average for a Fourier coupling);
    /// positive by the sign convention.
    double trace = 0.0;
    bool converged = false;
    double est_error = 0.0;
    std::size_t basis_size = 0;
    /// psi_1(u, tau), normalised so that the weighted L^2 norm over the
    /// half-sphere equals one.  tau is ignored for constant couplings.
    std::function<double(double, double)> eigenfunction;
};

Mu1Result mu1_constant(int N, double s, double a, const SpectralConfig& cfg = {});
Mu1Result mu1_fourier(double s, const CouplingDescriptor& coupling, const SpectralConfig& cfg = {});
/// Dispatches on the coupling kind; Fourier couplings require N = 2.
Mu1Result mu1(int N, double s, const CouplingDescriptor& coupling, const SpectralConfig& cfg = {});

/// lambda(alpha) for 0 < alpha < (N-2s)/2.
double lambda_of_alpha(int N, double s, double alpha);
/// Limit of lambda(alpha) as alpha -> 0+.
double lambda_endpoint(int N, double s);
/// Inverse of lambda_of_alpha for 0 < lam < lambda_endpoint(N, s).
double alpha_of_lambda(int N, double s, double lam);
/// lambda(s) = 2^{2s} Gamma((N+4s)/4) / Gamma((N-4s)/4); requires N > 4s.
double critical_coupling(int N, double s);

/// Surface area of the unit sphere S^{N-1} in R^N.
double sphere_area(int N);

/// Throws RangeError unless N >= 1, s in the supported box and N > 2s.
void check_problem(int N, double s);

}  // namespace spectral_hardy::angular
