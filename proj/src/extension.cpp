#include "spectral_hardy/extension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "spectral_hardy/errors.hpp"
#include "spectral_hardy/quadrature.hpp"
#include "spectral_hardy/specfun.hpp"

namespace spectral_hardy::extension {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kDim = 3;

void check_args(double s, double m, double t) {
    specfun::check_order_s(s);
    if (!(m > 0.0) || !std::isfinite(m)) throw RangeError("m must be positive");
    if (!(t > 0.0) || !std::isfinite(t)) throw RangeError("t must be positive");
}

double order(double s) { return 0.5 * (kDim + 2.0 * s); }

// y^{1-nu} K_{nu-1}(y), whose y-derivative is -y^{1-nu} K_nu(y).
double g(double nu, double y) { return std::pow(y, 1.0 - nu) * specfun::bessel_k_unbounded(nu - 1.0, y); }
double gk(double nu, double y) { return std::pow(y, 1.0 - nu) * specfun::bessel_k_unbounded(nu, y); }

// With Z = sqrt(t^2 + q^2), A(q) = int_0^q P(t, q') q' dq' + const, so that the shell
// average of P over |y| = rho seen from |x| = r is (A(r+rho) - A(|r-rho|)) / (2 r rho).
struct ShellKernel {
    double s, m, t, nu, pre;

    ShellKernel(double s_, double m_, double t_)
        : s(s_), m(m_), t(t_), nu(order(s_)),
          pre(kernel_constant(kDim, s_) * std::pow(m_, 2.0 * order(s_) - 2.0)) {}

    // A(q) and d/dt A(q) less their q-independent parts (which cancel in
    // every shell difference, and would otherwise swamp it at large q).
    double A(double q) const {
        const double Z = std::hypot(t, q);
        return -pre * std::pow(t, 2.0 * s) * g(nu, m * Z);
    }

    double dA(double q) const {
        const double Z = std::hypot(t, q);
        return pre * (-2.0 * s * std::pow(t, 2.0 * s - 1.0) * g(nu, m * Z) +
                      std::pow(t, 2.0 * s) * m * (t / Z) * gk(nu, m * Z));
    }
};

// Breakpoints for a rho-integral against u when the kernel is concentrated
// within a few t of rho = r.
std::vector<double> breakpoints(const RadialFunction& u, double r, double t, double lo, double hi) {
    std::vector<double> bp{lo, hi};
    for (double c = 0.25; c <= 256.0; c *= 4.0)
        for (double v : {r - c * t, r + c * t}) bp.push_back(v);
    bp.push_back(r);
    const double ell = u.length_scale();
    for (double v = lo + ell; v < std::min(hi, lo + 400.0 * ell); v += ell) bp.push_back(v);
    std::vector<double> out;
    for (double v : bp)
        if (v >= lo && v <= hi) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) < 1e-14 * (1 + std::abs(a)); }),
              out.end());
    return out;
}

quad::Options fine() {
    quad::Options o;
    o.rel_tol = 1e-13;
    o.abs_tol = 1e-16;
    o.max_intervals = 4000;
    return o;
}

double checked(const quad::Result& res, const char* who) {
    if (!res.converged) {
        const double achieved = res.error / std::max(std::abs(res.value), 1e-300);
        if (achieved > 1e-9) throw ConvergenceError(std::string(who) + ": quadrature failed", achieved);
    }
    return res.value;
}

}  // namespace

double kernel_constant(int N, double s) {
    if (N < 1) throw RangeError("dimension must be >= 1");
    return std::pow(2.0, 1.0 - s) / (std::pow(2.0 * kPi, 0.5 * N) * specfun::gamma(s));
}

double bessel_kernel(double s, double m, double t, double rho) {
    check_args(s, m, t);
    if (!(rho >= 0.0)) throw RangeError("rho must be nonnegative");
    const double nu = order(s);
    const double Z = std::hypot(t, rho);
    return kernel_constant(kDim, s) * std::pow(t, 2.0 * s) * std::pow(m, nu) * std::pow(Z, -nu) *
           specfun::bessel_k_unbounded(nu, m * Z);
}

Estimate kernel_mass(double s, double m, double t) {
    check_args(s, m, t);
    std::vector<double> bp{0.0};
    const double top = 750.0 / m;
    for (double v = 0.25 * t; v < top; v *= 2.0) bp.push_back(v);
    bp.push_back(top);
    auto res = quad::integrate([&](double rho) { return 4.0 * kPi * rho * rho * bessel_kernel(s, m, t, rho); }, bp,
                               fine());
    return {checked(res, "kernel_mass"), res.error};
}

ExtensionField::ExtensionField(Eval f, double s, double m) : f_(std::move(f)), s_(s), m_(m) {
    specfun::check_order_s(s);
    if (!(m > 0.0)) throw RangeError("m must be positive");
}

ExtensionField ExtensionField::of(const RadialFunction& u, double s, double m) {
    return ExtensionField([u, s, m](double t, double r) { return extend_radial(u, s, m, t, r); }, s, m);
}

ExtensionField ExtensionField::profile(double s, double m) {
    return ExtensionField([s, m](double t, double) { return specfun::theta_profile(s, m * t); }, s, m);
}

double extend_radial(const RadialFunction& u, double s, double m, double t, double r) {
    check_args(s, m, t);
    if (!(r >= 0.0)) throw RangeError("r must be nonnegative");
    if (u.is_zero()) return 0.0;
    const double lo = u.decay() == fracops::DecayClass::Compact ? u.inner() : 0.0;
    const double hi = u.extent();
    if (r == 0.0) {
        auto res = quad::integrate(
            [&](double rho) { return 4.0 * kPi * rho * rho * u(rho) * bessel_kernel(s, m, t, rho); },
            breakpoints(u, 0.0, t, lo, hi), fine());
        return checked(res, "extend_radial");
    }
    const ShellKernel K(s, m, t);
    auto res = quad::integrate(
        [&](double rho) { return u(rho) * rho * (K.A(r + rho) - K.A(std::abs(r - rho))); },
        breakpoints(u, r, t, lo, hi), fine());
    return 2.0 * kPi / r * checked(res, "extend_radial");
}

std::vector<Estimate> extend_radial_fourier(const fracops::RadialTransform& transform, double s, double m, double t,
                                            std::span<const double> radii) {
    check_args(s, m, t);
    return transform.apply([=](double k) { return specfun::theta_profile(s, t * std::hypot(k, m)); }, radii, 1e-10);
}

Residual pde_residual(const ExtensionField& w, double t, double r, double h) {
    if (!(h > 0.0)) throw RangeError("step must be positive");
    if (t < 4.0 * h || r < 4.0 * h) throw RangeError("step too large: need t >= 4h and r >= 4h");
    const double s = w.s(), m = w.m();
    const double c = w(t, r);
    const double tp = w(t + h, r), tm = w(t - h, r);
    const double rp = w(t, r + h), rm = w(t, r - h);
    const double terms[] = {(tp - 2.0 * c + tm) / (h * h), (1.0 - 2.0 * s) / t * (tp - tm) / (2.0 * h),
                            (rp - 2.0 * c + rm) / (h * h), 2.0 / r * (rp - rm) / (2.0 * h), -m * m * c};
    Residual out;
    for (double x : terms) {
        out.value -= x;
        out.scale = std::max(out.scale, std::abs(x));
    }
    return out;
}

double weighted_flux(const RadialFunction& u, double s, double m, double t, double r) {
    check_args(s, m, t);
    if (!(r > 0.0)) throw RangeError("r must be positive");
    if (u.is_zero()) return 0.0;
    // w_t = int d_t P (u(y) - u(x)) dy + u(x) d_t theta(m t); the first
    // integral converges without cancellation trouble as t -> 0.
    const ShellKernel K(s, m, t);
    const double ur = u(r);
    const double hi = std::max(u.extent(), r) + r + 60.0 / m;
    auto res = quad::integrate(
        [&](double rho) { return (u(rho) - ur) * rho * (K.dA(r + rho) - K.dA(std::abs(r - rho))); },
        breakpoints(u, r, t, 0.0, hi), fine());
    const double wt = 2.0 * kPi / r * checked(res, "weighted_flux") + ur * m * specfun::theta_derivative(s, m * t);
    return -std::pow(t, 1.0 - 2.0 * s) * wt;
}

FluxCheck boundary_flux_check(const RadialFunction& u, double s, double m, double r) {
    specfun::check_order_s(s);
    FluxCheck out;
    if (u.is_zero()) return out;
    // F(t) = L + c1 t^{2-2s} + c2 t^2 + ...; eliminate both corrections.
    const double ts[3] = {1e-2, 5e-3, 2.5e-3};
    double F[3];
    for (int i = 0; i < 3; ++i) F[i] = weighted_flux(u, s, m, ts[i], r);
    const double p1 = 2.0 - 2.0 * s, p2 = 2.0;
    auto two_point = [](double p, double fa, double fb) {
        const double q = std::pow(2.0, p);
        return (q * fb - fa) / (q - 1.0);
    };
    const double e01 = two_point(p1, F[0], F[1]);
    const double e12 = two_point(p1, F[1], F[2]);
    out.lhs = std::abs(p2 - p1) < 1e-3 ? e12 : two_point(p2, e01, e12);
    out.lhs_spread = std::abs(out.lhs - e12);
    out.rhs = specfun::kappa_s(s) * fracops::frac_power_radial(s, m * m, u, r).value;
    return out;
}

}  // namespace spectral_hardy::extension
