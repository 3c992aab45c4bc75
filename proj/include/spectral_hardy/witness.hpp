#pragma once

// The function f(z) = psi_1(z/|z|) |z|^{(2s-N)/2} K_{nu_1}(sqrt(b) |z|) on the
// half-space R^{N+1}_+, nu_1 = sqrt((N-2s)^2/4 + mu_1(a)), which lies in L^2 on
// the boundary exactly when nu_1 < s, and its companion built from I_{nu_1}.

#include <span>
#include <utility>
#include <vector>

#include "spectral_hardy/angular.hpp"
#include "spectral_hardy/fracops.hpp"

namespace spectral_hardy::witness {

struct Witness {
    int N = 3;
    double s = 0.5;
    double b = 1.0;
    double mu1 = 0.0;
    double nu1 = 0.0;
    /// psi_1 on the equator (tau-average for Fourier couplings).
    double trace = 1.0;
    /// Coupling value when constant; NaN otherwise.
    double coupling = 0.0;
    /// Angular solve; eigenfunction is empty for witnesses built from an order.
    angular::Mu1Result mode;

    /// rho^{(2s-N)/2} K_{nu1}(sqrt(b) rho).
    double radial(double rho) const;
    /// rho^{(2s-N)/2} I_{nu1}(sqrt(b) rho).
    double companion_radial(double rho) const;
    /// f(0, x) with |x| = r.
    double trace_profile(double r) const { return trace * radial(r); }
    double companion_trace(double r) const { return trace * companion_radial(r); }
    /// f(t, x) with |x| = r, at equator angle tau (ignored for constant couplings).
    double field(double t, double r, double tau = 0.0) const;
    double companion_field(double t, double r, double tau = 0.0) const;
};

/// Solves for mu_1(a) and assembles the witness.  Throws RangeError when
/// mu_1 + ((N-2s)/2)^2 < 0 or b <= 0.
Witness build_witness(int N, double s, double b, const angular::CouplingDescriptor& coupling,
                      const angular::SpectralConfig& cfg = {});

/// Witness with a prescribed order and unit trace (no angular solve); the
/// field evaluators are unavailable.
Witness witness_from_order(int N, double s, double b, double nu1);

/// |R'' + ((N+1-2s)/rho) R' - mu_1 R / rho^2 - b R| relative to the largest
/// term, with derivatives of K from the recurrence, for r in [1e-3, 50].
double radial_ode_residual(const Witness& w, double r);
/// Same for the I_{nu1} companion; also needs sqrt(b) r <= 100.
double companion_ode_residual(const Witness& w, double r);

struct L2Report {
    bool in_l2 = false;
    /// nu_1 equal to s within tolerance: logarithmic divergence.
    bool boundary = false;
    /// Exponent of |f(0,x)|^2 |x|^{N-1} at the origin: 2s - 2 nu_1 - 1.
    double near_origin_exponent = 0.0;
    /// (eps, int_eps^1 |f(0,r)|^2 r^{N-1} dr) for eps = 1e-2 .. 1e-6.
    std::vector<std::pair<double, double>> truncated;
    /// Fitted d log I / d log eps over the last three eps; about 2s - 2 nu_1 when divergent.
    double growth_exponent = 0.0;
};

L2Report l2_membership(const Witness& w);

struct ExponentFit {
    double f_exp = 0.0, g_exp = 0.0;
    double f_expected = 0.0, g_expected = 0.0;
};

/// Log-log slopes of the traces of f and g over r in [1e-4, 1e-2].
ExponentFit near_origin_exponents(const Witness& w);

/// Decay rate lambda in log f(0, r) = c - lambda r + beta log r, fitted on [r1, r2].
double tail_decay_rate(const Witness& w, double r1 = 10.0, double r2 = 40.0);

/// |int f(0,x) [(-Delta+b)^s phi - a |x|^{-2s} phi] dx| divided by the same
/// integral with absolute values.  N = 3 only; a defaults to the witness coupling.
double weak_identity_residual(const Witness& w, const fracops::RadialFunction& phi);
double weak_identity_residual(const Witness& w, const fracops::RadialFunction& phi, double a);
/// One residual per coupling value, sharing the evaluation of (-Delta+b)^s phi.
std::vector<double> weak_identity_residuals(const Witness& w, const fracops::RadialFunction& phi,
                                            std::span<const double> couplings);

}  // namespace spectral_hardy::witness
