#include "spectral_hardy/classifier.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spectral_hardy/errors.hpp"
#include "spectral_hardy/format.hpp"

namespace spectral_hardy::classifier {

std::pair<double, double> decay_exponents(int N, double s, double mu1) {
    const double p = 0.5 * (N - 2.0 * s);
    const double disc = p * p + mu1;
    if (!(disc >= 0.0)) throw std::domain_error("decay_exponents: negative discriminant");
    const double root = std::sqrt(disc);
    return {-p + root, -p - root};
}

EsaReport assess(int N, double s, double m, double mu1, double est_error, bool converged) {
    angular::check_problem(N, s);
    if (!(m >= 0.0)) throw RangeError("mass must be nonnegative");
    EsaReport r;
    r.N = N;
    r.s = s;
    r.m = m;
    r.mu1 = mu1;
    r.est_error = est_error;
    r.converged = converged;
    const double p = 0.5 * (N - 2.0 * s);
    r.positivity_ok = mu1 + p * p > 0.0;
    r.margin = p * p - s * s + mu1;
    if (r.positivity_ok) {
        std::tie(r.gamma_exp, r.alpha_exp) = decay_exponents(N, s, mu1);
    } else {
        r.gamma_exp = r.alpha_exp = std::numeric_limits<double>::quiet_NaN();
    }
    if (N > 4.0 * s) r.critical_lambda = angular::critical_coupling(N, s);
    if (r.positivity_ok && converged) {
        r.marginal = std::abs(r.margin) <= std::max(est_error, kMarginFloor);
        r.esa = r.marginal || r.margin >= 0.0;
    }
    return r;
}

EsaReport classify(int N, double s, double m, const angular::CouplingDescriptor& coupling,
                   const angular::SpectralConfig& cfg) {
    const auto res = angular::mu1(N, s, coupling, cfg);
    return assess(N, s, m, res.mu1, res.est_error, res.converged);
}

EsaReport classify_closed_form(int N, double s, double m, double a) {
    angular::check_problem(N, s);
    const double p = 0.5 * (N - 2.0 * s);
    double mu1 = 0.0;
    if (a != 0.0) {
        const double alpha = angular::alpha_of_lambda(N, s, a);
        mu1 = alpha * alpha - p * p;
    }
    return assess(N, s, m, mu1, 0.0, true);
}

std::string to_json(const EsaReport& r) {
    format::JsonObject o;
    o.number("mu1", r.mu1);
    o.boolean("positivity_ok", r.positivity_ok);
    if (r.esa) o.boolean("esa", *r.esa); else o.null("esa");
    o.number("margin", r.margin);
    o.number("gamma_exp", r.gamma_exp);
    o.number("alpha_exp", r.alpha_exp);
    if (r.critical_lambda) o.number("critical_lambda", *r.critical_lambda); else o.null("critical_lambda");
    o.number("est_error", r.est_error);
    return o.str();
}

}  // namespace spectral_hardy::classifier
