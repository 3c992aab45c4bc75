#pragma once

// Test-only reference computations.  None of these call into the library:
// they use textbook series, plain trapezoid sums, Boost.Math closed forms or
// an adaptive ODE shooting method, so agreement with the library is an
// independent check.

#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <boost/numeric/odeint.hpp>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace oracle {

constexpr double kPi = std::numbers::pi;

// Gamma from the Stirling series after shifting the argument above 40;
// reflection below 1/2.
inline double stirling_gamma(double x) {
    if (x < 0.5) return kPi / (std::sin(kPi * x) * stirling_gamma(1.0 - x));
    double shift = 1.0;
    while (x < 40.0) {
        shift *= x;
        x += 1.0;
    }
    // B_{2k} / (2k (2k-1))
    static constexpr std::array<double, 8> c{1.0 / 12.0,     -1.0 / 360.0,      1.0 / 1260.0,   -1.0 / 1680.0,
                                             1.0 / 1188.0,   -691.0 / 360360.0, 1.0 / 156.0,    -3617.0 / 122400.0};
    double series = 0.0, xp = x;
    for (double ck : c) {
        series += ck / xp;
        xp *= x * x;
    }
    const double log_g = (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * kPi) + series;
    return std::exp(log_g) / shift;
}

// K_nu(r) = int_0^inf exp(-r cosh t) cosh(nu t) dt by the trapezoid rule,
// which converges geometrically for this entire, doubly decaying integrand.
inline double bessel_k_integral(double nu, double r) {
    const double h = 1.0 / 128.0;
    double sum = 0.5 * std::exp(-r);
    for (int i = 1;; ++i) {
        const double t = i * h;
        const double term = std::exp(-r * std::cosh(t) + std::abs(nu) * t) * 0.5 * (1.0 + std::exp(-2.0 * std::abs(nu) * t));
        sum += term;
        if (term < 1e-18 * sum && r * std::cosh(t) > 50.0) break;
    }
    return h * sum;
}

// Ascending series for I_nu(r), n terms.
inline double bessel_i_series(double nu, double r, int n = 60) {
    const double q = 0.25 * r * r;
    double term = std::pow(0.5 * r, nu) / stirling_gamma(nu + 1.0), sum = 0.0;
    for (int k = 0; k < n; ++k) {
        sum += term;
        term *= q / ((k + 1.0) * (k + 1.0 + nu));
    }
    return sum;
}

inline double central_difference(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Root of a sign-changing f on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// lambda(alpha) evaluated with the Stirling gamma.
inline double lambda_of_alpha(int N, double s, double alpha) {
    const auto G = stirling_gamma;
    return std::pow(2.0, 2.0 * s) * G((N + 2 * s + 2 * alpha) / 4) * G((N + 2 * s - 2 * alpha) / 4) /
           (G((N - 2 * s + 2 * alpha) / 4) * G((N - 2 * s - 2 * alpha) / 4));
}

inline double kappa(double s) { return stirling_gamma(1.0 - s) / (std::pow(2.0, 2.0 * s - 1.0) * stirling_gamma(s)); }

// ((-Delta)^s exp(-r^2))(r) in R^3 = 4^s Gamma(3/2+s)/Gamma(3/2) 1F1(3/2+s; 3/2; -r^2).
inline double gaussian_frac_laplacian(double s, double r) {
    return std::pow(4.0, s) * std::tgamma(1.5 + s) / std::tgamma(1.5) *
           boost::math::hypergeometric_1F1(1.5 + s, 1.5, -r * r);
}

// First eigenvalue of
//   -(u^{1-2s}(1-u^2)^{N/2} psi')' = mu u^{1-2s}(1-u^2)^{(N-2)/2} psi  on (0,1),
//   lim_{u->0} u^{1-2s}(1-u^2)^{N/2} psi' = -kappa_s a psi(0),  psi bounded at 1,
// by shooting from both ends to u = 1/2 and bisecting the Wronskian mismatch.
class AngularShooting {
public:
    AngularShooting(int N, double s, double a) : N_(N), s_(s), a_(a), kappa_(kappa(s)) {}

    double mismatch(double mu) const {
        using State = std::array<double, 2>;  // psi, flux
        namespace ode = boost::numeric::odeint;
        auto stepper = ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_dopri5<State>());
        const double um = 0.5;

        // Left, in v = u^{2s}/(2s), started from the two leading series terms.
        const double u0 = 1e-7;
        State L{1.0 - kappa_ * a_ * std::pow(u0, 2 * s_) / (2 * s_),
                -kappa_ * a_ - mu * std::pow(u0, 2 - 2 * s_) / (2 - 2 * s_)};
        auto left = [&](const State& y, State& dy, double v) {
            const double u = std::pow(2 * s_ * v, 1.0 / (2 * s_));
            const double q = 1.0 - u * u;
            dy[0] = y[1] / std::pow(q, 0.5 * N_);
            dy[1] = -mu * std::pow(u, 2 - 4 * s_) * std::pow(q, 0.5 * (N_ - 2)) * y[0];
        };
        const double v0 = std::pow(u0, 2 * s_) / (2 * s_), vm = std::pow(um, 2 * s_) / (2 * s_);
        ode::integrate_adaptive(stepper, left, L, v0, vm, 1e-6);

        // Right, in x = 1 - u, from the bounded solution psi(1) = 1, psi'(1) = mu / N.
        const double x0 = 1e-7;
        const double u1 = 1.0 - x0;
        State R{1.0 - mu / N_ * x0, weight(u1) * mu / N_};
        auto right = [&](const State& y, State& dy, double x) {
            const double u = 1.0 - x;
            dy[0] = -y[1] / weight(u);
            dy[1] = mu * std::pow(u, 1 - 2 * s_) * std::pow(1 - u * u, 0.5 * (N_ - 2)) * y[0];
        };
        ode::integrate_adaptive(stepper, right, R, x0, 1.0 - um, 1e-6);
        return L[0] * R[1] - R[0] * L[1];
    }

    // Lowest root found by scanning upwards from mu_lo.
    double first_eigenvalue(double mu_lo = -20.0, double step = 0.05) const {
        double prev = mismatch(mu_lo);
        for (double mu = mu_lo + step; mu < 200.0; mu += step) {
            const double cur = mismatch(mu);
            if ((cur < 0.0) != (prev < 0.0))
                return bisect([this](double m) { return mismatch(m); }, mu - step, mu, 60);
            prev = cur;
        }
        throw std::runtime_error("AngularShooting: no eigenvalue found");
    }

private:
    double weight(double u) const { return std::pow(u, 1 - 2 * s_) * std::pow(1 - u * u, 0.5 * N_); }
    int N_;
    double s_, a_, kappa_;
};

}  // namespace oracle
