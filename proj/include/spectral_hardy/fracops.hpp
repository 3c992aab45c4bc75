#pragma once

// Fractional powers (-Delta + c)^s of radial functions in R^3 through the
// radial Fourier (sine) transform, the singular-integral form of
// (-Delta + m^2)^s in general dimension, the Kelvin transform and power-law
// fitting.

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace spectral_hardy::fracops {

enum class DecayClass { Compact, Exponential, PowerLaw };

/// Radial profile r -> u(r) with a declared decay class.
///
/// Compact: supported in [inner, outer].  Exponential: negligible (below
/// ~1e-17 of its peak) beyond extent.  PowerLaw: u(r) ~ amplitude r^{-exponent}
/// at infinity, with u - amplitude (1+r^2)^{-exponent/2} negligible beyond
/// extent.  "smooth" means the even extension to the real line is smooth,
/// which the transform quadrature relies on.
class RadialFunction {
public:
    using Eval = std::function<double(double)>;

    static RadialFunction compact(Eval f, double inner, double outer, bool smooth = true);
    static RadialFunction exponential(Eval f, double extent, bool smooth = true);
    static RadialFunction power_law(Eval f, double exponent, double amplitude, double extent, bool smooth = true);

    /// amplitude * exp(-(r/width)^2).
    static RadialFunction gaussian(double amplitude = 1.0, double width = 1.0);
    /// amplitude * exp(1 - 1/(1 - xi^2)) with xi mapping [r1, r2] onto [-1, 1].
    static RadialFunction bump(double r1, double r2, double amplitude = 1.0);
    static RadialFunction zero();

    double operator()(double r) const { return f_(r); }
    const Eval& evaluator() const noexcept { return f_; }
    DecayClass decay() const noexcept { return decay_; }
    bool smooth() const noexcept { return smooth_; }
    bool is_zero() const noexcept { return zero_; }
    /// Inner edge of the support (0 unless compact).
    double inner() const noexcept { return inner_; }
    /// Outer support radius, or truncation radius for the other classes.
    double extent() const noexcept { return extent_; }
    double exponent() const noexcept { return exponent_; }
    double amplitude() const noexcept { return amplitude_; }
    /// Rough length over which u varies; used to place quadrature breakpoints.
    double length_scale() const;

    RadialFunction scaled(double factor) const;

    /// Samples the declared decay at a few radii; false on a violation.
    bool verify_decay() const;

private:
    RadialFunction() = default;
    Eval f_;
    DecayClass decay_ = DecayClass::Exponential;
    bool smooth_ = true;
    bool zero_ = false;
    double inner_ = 0.0, extent_ = 0.0, exponent_ = 0.0, amplitude_ = 0.0;
};

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// 3-D radial Fourier transform F(k) = (4 pi / k) int_0^inf rho u(rho) sin(k rho) drho,
/// tabulated once and then applied against radial multipliers.
class RadialTransform {
public:
    /// rel_tol bounds k^2 |F(k)| beyond kmax relative to its peak.
    explicit RadialTransform(RadialFunction u, double rel_tol = 1e-11);

    double operator()(double k) const;
    /// F at kronrod-panel-sized batches of frequencies; out[i] = F(k[i]).
    void evaluate(std::span<const double> k, std::span<double> out) const;
    /// Frequency beyond which F is negligible.
    double kmax() const noexcept { return kmax_; }
    const RadialFunction& source() const noexcept { return u_; }

    /// (1/(2 pi^2 r)) int_0^inf k M(k) F(k) sin(k r) dk for each r > 0, i.e. the
    /// radial function whose transform is M F.  Throws ConvergenceError if
    /// the panel error estimate exceeds tol relative to the integrand scale.
    std::vector<Estimate> apply(const std::function<double(double)>& multiplier, std::span<const double> radii,
                                double tol = 1e-8) const;

    /// (2 pi)^{-3} int |k|^{2s} |F|^2 d^3k.
    Estimate homogeneous_norm_sq(double s) const;

private:
    double remainder(double k) const;
    void remainder_block(const double* k, std::size_t count, double* out) const;
    double analytic_part(double k) const;

    RadialFunction u_;
    double h_ = 0.0;
    double kmax_ = 0.0;
    std::vector<double> rho_, weighted_;  // trapezoid nodes and h * rho * u(rho)
};

/// ((-Delta + c)^s u)(r) in R^3 via the Fourier multiplier (k^2 + c)^s.
Estimate frac_power_radial(double s, double c, const RadialFunction& u, double r);
std::vector<Estimate> frac_power_radial(double s, double c, const RadialFunction& u, std::span<const double> radii);
/// Same, reusing a tabulated transform.
std::vector<Estimate> frac_power_radial(double s, double c, const RadialTransform& transform,
                                        std::span<const double> radii);

/// c_{N,s} of the kernel representation of (-Delta + m^2)^s.
double relativistic_constant(int N, double s);

/// ((-Delta + m^2)^s phi)(x) for radial phi in R^N from
/// c_{N,s} m^{(N+2s)/2} PV int (phi(x) - phi(y)) |x-y|^{-(N+2s)/2} K_{(N+2s)/2}(m|x-y|) dy + m^{2s} phi(x),
/// with phi's second derivatives at |x| taken by finite differences near the
/// diagonal.  r = |x|.
Estimate relativistic_singular_integral(int N, double s, double m, const RadialFunction& phi, double r);
/// Point form; only |x| matters for radial phi.
Estimate relativistic_singular_integral(double s, double m, const RadialFunction& phi, std::span<const double> x);

/// r -> r^{2s-N} v(1/r).
RadialFunction kelvin_transform(const RadialFunction& v, int N, double s);

/// Least-squares slope of log|value| against log r.  Requires at least 8
/// samples spanning a decade with nonzero values; throws std::invalid_argument otherwise.
double fit_decay_exponent(std::span<const std::pair<double, double>> samples);

}  // namespace spectral_hardy::fracops
