#pragma once

// Bessel-kernel extension of radial data in R^3 to the half-space t > 0:
// w(t, x) = (P_m(t, .) * u)(x), which solves
//   -div(t^{1-2s} grad w) + m^2 t^{1-2s} w = 0,  -lim t^{1-2s} w_t = kappa_s (-Delta + m^2)^s u.

#include <functional>

#include "spectral_hardy/fracops.hpp"

namespace spectral_hardy::extension {

using fracops::Estimate;
using fracops::RadialFunction;

/// C'_{N,s} = 2^{1-s} / ((2 pi)^{N/2} Gamma(s)), fixed by requiring that
/// P_m(t, .) has Fourier transform theta(t sqrt(|xi|^2 + m^2)).
double kernel_constant(int N, double s);

/// P_m(t, x) in R^3 with |x| = rho.
double bessel_kernel(double s, double m, double t, double rho);

/// int_{R^3} P_m(t, x) dx by radial quadrature.
Estimate kernel_mass(double s, double m, double t);

/// A field (t, r) -> w on the half-space, radial in x, with its (s, m).
class ExtensionField {
public:
    using Eval = std::function<double(double, double)>;

    ExtensionField(Eval f, double s, double m);
    /// Extension of u by convolution with the kernel.
    static ExtensionField of(const RadialFunction& u, double s, double m);
    /// theta(m t): the extension of a constant.
    static ExtensionField profile(double s, double m);

    double operator()(double t, double r) const { return f_(t, r); }
    double s() const noexcept { return s_; }
    double m() const noexcept { return m_; }

private:
    Eval f_;
    double s_, m_;
};

/// w(t, r) by convolution: the angular integral is done in closed form, so
/// one radial quadrature against u remains.
double extend_radial(const RadialFunction& u, double s, double m, double t, double r);

/// w(t, r) for several r through the Fourier multiplier theta(t sqrt(k^2 + m^2)).
std::vector<Estimate> extend_radial_fourier(const fracops::RadialTransform& transform, double s, double m, double t,
                                            std::span<const double> radii);

struct Residual {
    double value = 0.0;
    /// Largest term of the operator, for relative comparisons.
    double scale = 0.0;
};

/// Centered-difference residual of
/// -(w_tt + (1-2s)/t w_t + w_rr + (2/r) w_r) + m^2 w (the equation divided by t^{1-2s}).
/// Requires t >= 4h and r >= 4h.
Residual pde_residual(const ExtensionField& w, double t, double r, double h);

struct FluxCheck {
    double lhs = 0.0;  ///< -lim t^{1-2s} w_t, extrapolated
    double rhs = 0.0;  ///< kappa_s ((-Delta + m^2)^s u)(r)
    double lhs_spread = 0.0;  ///< change between the last two extrapolants
};

/// -t^{1-2s} w_t at t > 0, from the convolution route with the kernel's t-derivative.
double weighted_flux(const RadialFunction& u, double s, double m, double t, double r);

FluxCheck boundary_flux_check(const RadialFunction& u, double s, double m, double r);

}  // namespace spectral_hardy::extension
