#pragma once

// Quadrature building blocks: orthonormal Jacobi families and Gauss-Jacobi
// rules on [0,1], plus adaptive Gauss-Kronrod for smooth integrands.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace spectral_hardy::quad {

/// Orthonormal polynomials on [0,1] for the weight x^beta (1-x)^alpha.
template <typename Real>
class JacobiFamily {
public:
    JacobiFamily(Real alpha, Real beta, std::size_t max_degree);

    Real alpha() const noexcept { return alpha_; }
    Real beta() const noexcept { return beta_; }
    std::size_t max_degree() const noexcept { return diag_.size() - 1; }

    /// Values p_0..p_n at x (n <= max_degree) written into vals; derivatives
    /// into ders when non-null.
    void evaluate(std::size_t n, Real x, std::vector<Real>& vals, std::vector<Real>* ders = nullptr) const;

    /// Recurrence coefficients: x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}.
    const std::vector<Real>& diagonal() const noexcept { return diag_; }
    const std::vector<Real>& offdiagonal() const noexcept { return off_; }
    Real total_mass() const noexcept { return mu0_; }

private:
    Real alpha_, beta_, mu0_;
    std::vector<Real> diag_;  // a_0..a_max
    std::vector<Real> off_;   // off_[k] = b_k, off_[0] unused
};

template <typename Real>
struct Rule {
    std::vector<Real> nodes;
    std::vector<Real> weights;
};

/// n-point Gauss rule on [0,1] for the weight x^beta (1-x)^alpha; exact for
/// polynomials of degree 2n-1.  Requires alpha, beta > -1.
template <typename Real>
Rule<Real> gauss_jacobi(std::size_t n, Real alpha, Real beta);

/// n-point Gauss-Legendre rule on [a,b].
Rule<double> gauss_legendre(std::size_t n, double a = 0.0, double b = 1.0);

/// 15-point Kronrod rule on [a,b] with the weights of its embedded 7-point
/// Gauss rule (zero at the Kronrod-only nodes).
struct KronrodPanel {
    std::array<double, 15> nodes;
    std::array<double, 15> kronrod;
    std::array<double, 15> gauss;
};
KronrodPanel kronrod15(double a, double b);

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::size_t max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t intervals = 0;
    bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7/15) on [a,b].  Never throws on
/// non-convergence; inspect Result::converged.
Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opts = {});

/// Same as integrate(), but splits [a,b] at the given interior breakpoints
/// first and sums the pieces.
Result integrate(const std::function<double(double)>& f, const std::vector<double>& breakpoints,
                 const Options& opts = {});

}  // namespace spectral_hardy::quad
