#pragma once

// Essential self-adjointness of (-Delta + m^2)^s - a(x/|x|) |x|^{-2s} on
// C_c^infty(R^N \ {0}) from the angular eigenvalue mu_1(a).

#include <optional>
#include <string>
#include <utility>

#include "spectral_hardy/angular.hpp"

namespace spectral_hardy::classifier {

struct EsaReport {
    int N = 0;
    double s = 0.0;
    double m = 0.0;
    double mu1 = 0.0;
    /// mu_1 + ((N-2s)/2)^2 > 0.
    bool positivity_ok = false;
    /// Empty when positivity fails or the eigenvalue did not converge.
    std::optional<bool> esa;
    /// |margin| within the eigenvalue's error band; esa is then resolved
    /// on the inclusive side.
    bool marginal = false;
    /// ((N-2s)/2)^2 - s^2 + mu_1; esa iff margin >= 0.
    double margin = 0.0;
    /// NaN when the discriminant is negative.
    double gamma_exp = 0.0;
    double alpha_exp = 0.0;
    /// lambda(s), absent when N <= 4s.
    std::optional<double> critical_lambda;
    double est_error = 0.0;
    bool converged = true;
};

/// Smallest band half-width used for threshold comparisons.
inline constexpr double kMarginFloor = 1e-10;

/// gamma = -(N-2s)/2 + sqrt((N-2s)^2/4 + mu1), alpha the conjugate root.
/// Throws std::domain_error for a negative discriminant.
std::pair<double, double> decay_exponents(int N, double s, double mu1);

/// Report from a known mu_1 and its error estimate.
EsaReport assess(int N, double s, double m, double mu1, double est_error, bool converged);

EsaReport classify(int N, double s, double m, const angular::CouplingDescriptor& coupling,
                   const angular::SpectralConfig& cfg = {});

/// Uses mu_1(a) = alpha(a)^2 - ((N-2s)/2)^2 with alpha = alpha_of_lambda(a);
/// constant 0 <= a < lambda(0+) only.
EsaReport classify_closed_form(int N, double s, double m, double a);

/// JSON object with fields mu1, positivity_ok, esa, margin, gamma_exp,
/// alpha_exp, critical_lambda, est_error in that order; 17 significant digits.
std::string to_json(const EsaReport& report);

}  // namespace spectral_hardy::classifier
