#pragma once

// Special functions used throughout the library: Gamma, modified Bessel
// functions of real order and the extension profile theta.
//
// Supported box: s in [0.05, 0.95], |nu| <= 50, r in [1e-6, 100].  Inputs
// outside the box raise RangeError instead of degrading silently.

namespace spectral_hardy::specfun {

inline constexpr double kMinS = 0.05;
inline constexpr double kMaxS = 0.95;
inline constexpr double kMaxOrder = 50.0;
inline constexpr double kMinArg = 1e-6;
inline constexpr double kMaxArg = 100.0;

/// Gamma function (Lanczos, g = 7, nine terms, reflection below 1/2).
/// Throws PoleError at non-positive integers and OverflowError past ~171.6.
double gamma(double x);

/// log|Gamma(x)| for x > 0.
double log_gamma(double x);

/// Modified Bessel function of the second kind K_nu(r).  Negative orders use
/// K_{-nu} = K_nu.
double bessel_k(double nu, double r);

/// K_nu(r) for any r > 0 (|nu| <= 50) without the box check on r, for
/// kernels that sample far tails or near-diagonal points.  Underflows to 0
/// past r ~ 745; throws OverflowError when the value exceeds double range.
double bessel_k_unbounded(double nu, double r);

/// Modified Bessel function of the first kind I_nu(r), nu >= 0.
double bessel_i(double nu, double r);

/// K_nu'(r) = -(nu/r) K_nu(r) - K_{nu-1}(r).
double bessel_k_derivative(double nu, double r);

/// I_nu'(r) = I_{nu+1}(r) + (nu/r) I_nu(r).
double bessel_i_derivative(double nu, double r);

/// theta(r) = (2/Gamma(s)) (r/2)^s K_s(r); theta(0) = 1.  Solves
/// theta'' + ((1-2s)/r) theta' - theta = 0.
double theta_profile(double s, double r);

/// theta'(r) = -(2^{1-s}/Gamma(s)) r^s K_{1-s}(r).
double theta_derivative(double s, double r);

/// kappa_s = Gamma(1-s) / (2^{2s-1} Gamma(s)).
double kappa_s(double s);

/// Throws RangeError unless s lies in the supported box.
void check_order_s(double s);

}  // namespace spectral_hardy::specfun
