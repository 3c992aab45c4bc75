#include "spectral_hardy/witness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "spectral_hardy/errors.hpp"
#include "spectral_hardy/quadrature.hpp"
#include "spectral_hardy/specfun.hpp"

namespace spectral_hardy::witness {

namespace {

constexpr double kPi = std::numbers::pi;

double half_gap(const Witness& w) { return 0.5 * (w.N - 2.0 * w.s); }

// Values and first two derivatives of a Bessel-type factor at x.
struct Jet {
    double v, d1, d2;
};

// K_nu and its derivatives through K_nu' = -(nu/x) K_nu - K_{nu-1}, applied twice.
Jet k_jet(double nu, double x) {
    auto K = [](double n, double y) { return specfun::bessel_k_unbounded(n, y); };
    const double k0 = K(nu, x), k1 = K(nu - 1.0, x), k2 = K(nu - 2.0, x);
    const double d1 = -(nu / x) * k0 - k1;
    const double dk1 = -((nu - 1.0) / x) * k1 - k2;
    const double d2 = (nu / (x * x)) * k0 - (nu / x) * d1 - dk1;
    return {k0, d1, d2};
}

// I_nu' = I_{nu+1} + (nu/x) I_nu, applied twice.
Jet i_jet(double nu, double x) {
    const double i0 = specfun::bessel_i(nu, x), i1 = specfun::bessel_i(nu + 1.0, x), i2 = specfun::bessel_i(nu + 2.0, x);
    const double d1 = i1 + (nu / x) * i0;
    const double di1 = i2 + ((nu + 1.0) / x) * i1;
    const double d2 = di1 + (nu / x) * d1 - (nu / (x * x)) * i0;
    return {i0, d1, d2};
}

// Residual of R'' + ((N+1-2s)/rho) R' - mu1 R / rho^2 - b R for R = rho^{-p} J(sqrt(b) rho).
double ode_residual(const Witness& w, double r, const Jet& J) {
    if (!(r >= 1e-3 && r <= 50.0)) throw RangeError("radial_ode_residual: r outside [1e-3, 50]");
    const double p = half_gap(w), c = std::sqrt(w.b);
    const double rp = std::pow(r, -p);
    const double R = rp * J.v;
    const double R1 = -p / r * rp * J.v + rp * c * J.d1;
    const double R2 = p * (p + 1.0) / (r * r) * rp * J.v - 2.0 * p / r * rp * c * J.d1 + rp * w.b * J.d2;
    const double terms[] = {R2, (w.N + 1.0 - 2.0 * w.s) / r * R1, -w.mu1 * R / (r * r), -w.b * R};
    double sum = 0.0, scale = 0.0;
    for (double t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    return std::abs(sum) / scale;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    Eigen::MatrixXd A(x.size(), 2);
    Eigen::VectorXd rhs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = x[i];
        rhs(i) = y[i];
    }
    return A.colPivHouseholderQr().solve(rhs)(1);
}

}  // namespace

double Witness::radial(double rho) const {
    if (!(rho > 0.0)) throw RangeError("witness: radius must be positive");
    return std::pow(rho, -half_gap(*this)) * specfun::bessel_k_unbounded(nu1, std::sqrt(b) * rho);
}

double Witness::companion_radial(double rho) const {
    if (!(rho > 0.0)) throw RangeError("witness: radius must be positive");
    return std::pow(rho, -half_gap(*this)) * specfun::bessel_i(nu1, std::sqrt(b) * rho);
}

double Witness::field(double t, double r, double tau) const {
    if (!mode.eigenfunction) throw std::logic_error("witness: no angular eigenfunction attached");
    if (!(t >= 0.0 && r >= 0.0 && t + r > 0.0)) throw RangeError("witness: point must lie in the closed half-space minus 0");
    const double rho = std::hypot(t, r);
    return mode.eigenfunction(t / rho, tau) * radial(rho);
}

double Witness::companion_field(double t, double r, double tau) const {
    if (!mode.eigenfunction) throw std::logic_error("witness: no angular eigenfunction attached");
    if (!(t >= 0.0 && r >= 0.0 && t + r > 0.0)) throw RangeError("witness: point must lie in the closed half-space minus 0");
    const double rho = std::hypot(t, r);
    return mode.eigenfunction(t / rho, tau) * companion_radial(rho);
}

Witness build_witness(int N, double s, double b, const angular::CouplingDescriptor& coupling,
                      const angular::SpectralConfig& cfg) {
    if (!(b > 0.0) || !std::isfinite(b)) throw RangeError("b must be positive");
    Witness w;
    w.mode = angular::mu1(N, s, coupling, cfg);
    w.N = N;
    w.s = s;
    w.b = b;
    w.mu1 = w.mode.mu1;
    const double p = half_gap(w);
    const double disc = p * p + w.mu1;
    if (disc < 0.0) throw RangeError("witness: positivity condition fails (mu1 + ((N-2s)/2)^2 < 0)");
    w.nu1 = std::sqrt(disc);
    w.trace = w.mode.trace;
    w.coupling = coupling.is_constant() ? coupling.mean() : std::numeric_limits<double>::quiet_NaN();
    return w;
}

Witness witness_from_order(int N, double s, double b, double nu1) {
    angular::check_problem(N, s);
    if (!(b > 0.0) || !std::isfinite(b)) throw RangeError("b must be positive");
    if (!(nu1 >= 0.0) || nu1 > specfun::kMaxOrder - 2.0) throw RangeError("nu1 must lie in [0, 48]");
    Witness w;
    w.N = N;
    w.s = s;
    w.b = b;
    w.nu1 = nu1;
    const double p = half_gap(w);
    w.mu1 = nu1 * nu1 - p * p;
    w.trace = 1.0;
    w.coupling = std::numeric_limits<double>::quiet_NaN();
    return w;
}

double radial_ode_residual(const Witness& w, double r) { return ode_residual(w, r, k_jet(w.nu1, std::sqrt(w.b) * r)); }

double companion_ode_residual(const Witness& w, double r) {
    return ode_residual(w, r, i_jet(w.nu1, std::sqrt(w.b) * r));
}

L2Report l2_membership(const Witness& w) {
    L2Report out;
    out.near_origin_exponent = 2.0 * w.s - 2.0 * w.nu1 - 1.0;
    // nu1 inherits the eigenvalue error through d nu = d mu / (2 nu).
    const double tol = std::max(1e-9, w.nu1 > 0.0 ? w.mode.est_error / (2.0 * w.nu1) : 0.0);
    out.boundary = std::abs(w.nu1 - w.s) <= tol;
    out.in_l2 = !out.boundary && w.nu1 < w.s;

    // In x = log r the integrand is |f(0, e^x)|^2 e^{N x}.
    quad::Options opts;
    opts.rel_tol = 1e-12;
    opts.abs_tol = 0.0;
    double total = 0.0;
    double upper = 0.0;
    for (int d = 2; d <= 6; ++d) {
        const double lo = -d * std::numbers::ln10;
        std::vector<double> bp;
        for (double x = lo; x < upper; x += 0.5 * std::numbers::ln10) bp.push_back(x);
        bp.push_back(upper);
        auto res = quad::integrate(
            [&](double x) {
                const double f = w.trace_profile(std::exp(x));
                return f * f * std::exp(w.N * x);
            },
            bp, opts);
        total += res.value;
        upper = lo;
        out.truncated.emplace_back(std::exp(lo), total);
    }
    std::vector<double> lx, ly;
    for (std::size_t i = out.truncated.size() - 3; i < out.truncated.size(); ++i) {
        lx.push_back(std::log(out.truncated[i].first));
        ly.push_back(std::log(out.truncated[i].second));
    }
    out.growth_exponent = slope(lx, ly);
    return out;
}

ExponentFit near_origin_exponents(const Witness& w) {
    ExponentFit out;
    const double p = half_gap(w);
    out.f_expected = -p - w.nu1;
    out.g_expected = -p + w.nu1;
    std::vector<std::pair<double, double>> fs, gs;
    for (int i = 0; i <= 40; ++i) {
        const double r = std::pow(10.0, -4.0 + 2.0 * i / 40.0);
        fs.emplace_back(r, w.trace_profile(r));
        gs.emplace_back(r, w.companion_trace(r));
    }
    out.f_exp = fracops::fit_decay_exponent(fs);
    out.g_exp = fracops::fit_decay_exponent(gs);
    return out;
}

double tail_decay_rate(const Witness& w, double r1, double r2) {
    if (!(r1 > 0.0 && r2 > r1)) throw RangeError("tail fit needs 0 < r1 < r2");
    const int n = 61;
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const double r = r1 + (r2 - r1) * i / (n - 1);
        A(i, 0) = 1.0;
        A(i, 1) = -r;
        A(i, 2) = std::log(r);
        y(i) = std::log(std::abs(w.trace_profile(r)));
    }
    return A.colPivHouseholderQr().solve(y)(1);
}

std::vector<double> weak_identity_residuals(const Witness& w, const fracops::RadialFunction& phi,
                                            std::span<const double> couplings) {
    if (w.N != 3) throw RangeError("weak identity check is implemented for N = 3");
    std::vector<double> out(couplings.size(), 0.0);
    if (phi.is_zero()) return out;

    // Panels in r: graded towards the integrable singularity of f at 0,
    // fine across the support of phi, coarse in the exponential tail.
    const double c = std::sqrt(w.b);
    const double lo = phi.decay() == fracops::DecayClass::Compact ? phi.inner() : 0.0;
    const double hi = phi.extent();
    const double tail = hi + 16.0 / c;
    const double r0 = std::min(0.25, lo > 0.0 ? 0.5 * lo : 0.25);
    std::vector<double> bp;
    for (int j = 30; j >= 1; --j) bp.push_back(std::ldexp(r0, -j));
    bp.push_back(r0);
    auto fill = [&bp](double a, double b, double width) {
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
        for (int i = 1; i <= n; ++i) bp.push_back(a + (b - a) * i / n);
    };
    if (lo > r0) fill(r0, lo, 0.25);
    fill(std::max(lo, r0), hi, 0.1 * phi.length_scale());
    fill(hi, tail, 0.5);

    std::vector<double> nodes, wts;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const auto panel = quad::kronrod15(bp[i], bp[i + 1]);
        for (int q = 0; q < 15; ++q) {
            nodes.push_back(panel.nodes[q]);
            wts.push_back(panel.kronrod[q]);
        }
    }
    const auto L = fracops::frac_power_radial(w.s, w.b, phi, nodes);
    for (std::size_t ci = 0; ci < couplings.size(); ++ci) {
        const double a = couplings[ci];
        double sum = 0.0, mag = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double r = nodes[i];
            const double f = w.trace_profile(r);
            const double ph = phi(r);
            const double hardy = a * std::pow(r, -2.0 * w.s) * ph;
            const double jac = 4.0 * kPi * r * r * wts[i];
            sum += jac * f * (L[i].value - hardy);
            mag += std::abs(jac * f) * (std::abs(L[i].value) + std::abs(hardy));
        }
        out[ci] = std::abs(sum) / mag;
    }
    return out;
}

double weak_identity_residual(const Witness& w, const fracops::RadialFunction& phi, double a) {
    const double as[1] = {a};
    return weak_identity_residuals(w, phi, as)[0];
}

double weak_identity_residual(const Witness& w, const fracops::RadialFunction& phi) {
    if (std::isnan(w.coupling)) throw RangeError("weak identity needs a constant coupling");
    return weak_identity_residual(w, phi, w.coupling);
}

}  // namespace spectral_hardy::witness
