#include "spectral_hardy/fracops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spectral_hardy/angular.hpp"
#include "spectral_hardy/errors.hpp"
#include "spectral_hardy/quadrature.hpp"
#include "spectral_hardy/specfun.hpp"

namespace spectral_hardy::fracops {

namespace {

constexpr double kPi = std::numbers::pi;

void check_fraction(double s) {
    if (!(s > 0.0 && s < 1.0)) throw RangeError("s must lie in (0, 1)");
}

// Breakpoints for k-integrals: geometric grading towards k = 0 (where
// multipliers such as k^{2s} and power-law transforms are not smooth), then
// uniform panels of width at most `width` up to kmax.
std::vector<double> k_breakpoints(double kmax, double width) {
    std::vector<double> bp{0.0};
    const double k0 = std::min({1.0, 0.5 * kmax, 2.0 * width});
    for (int j = 40; j >= 1; --j) bp.push_back(std::ldexp(k0, -j));
    bp.push_back(k0);
    const auto panels = static_cast<std::size_t>(std::ceil((kmax - k0) / width));
    for (std::size_t i = 1; i <= panels; ++i) bp.push_back(k0 + (kmax - k0) * double(i) / double(panels));
    return bp;
}

}  // namespace

// --- RadialFunction -------------------------------------------------------

RadialFunction RadialFunction::compact(Eval f, double inner, double outer, bool smooth) {
    if (!(inner >= 0.0 && outer > inner && std::isfinite(outer))) throw RangeError("compact support needs 0 <= inner < outer");
    RadialFunction u;
    u.f_ = [f = std::move(f), inner, outer](double r) {
        return ((inner > 0.0 && r <= inner) || r >= outer) ? 0.0 : f(r);
    };
    u.decay_ = DecayClass::Compact;
    u.smooth_ = smooth;
    u.inner_ = inner;
    u.extent_ = outer;
    return u;
}

RadialFunction RadialFunction::exponential(Eval f, double extent, bool smooth) {
    if (!(extent > 0.0 && std::isfinite(extent))) throw RangeError("extent must be positive");
    RadialFunction u;
    u.f_ = std::move(f);
    u.decay_ = DecayClass::Exponential;
    u.smooth_ = smooth;
    u.extent_ = extent;
    return u;
}

RadialFunction RadialFunction::power_law(Eval f, double exponent, double amplitude, double extent, bool smooth) {
    if (!(exponent > 0.0 && exponent < 3.0)) throw RangeError("power-law exponent must lie in (0, 3)");
    if (!(extent > 0.0 && std::isfinite(extent))) throw RangeError("extent must be positive");
    RadialFunction u;
    u.f_ = std::move(f);
    u.decay_ = DecayClass::PowerLaw;
    u.smooth_ = smooth;
    u.extent_ = extent;
    u.exponent_ = exponent;
    u.amplitude_ = amplitude;
    return u;
}

RadialFunction RadialFunction::gaussian(double amplitude, double width) {
    if (!(width > 0.0)) throw RangeError("width must be positive");
    auto u = exponential([amplitude, width](double r) { return amplitude * std::exp(-(r / width) * (r / width)); },
                         6.5 * width);
    u.amplitude_ = amplitude;
    return u;
}

RadialFunction RadialFunction::bump(double r1, double r2, double amplitude) {
    if (!(r1 >= 0.0 && r2 > r1)) throw RangeError("bump needs 0 <= r1 < r2");
    const double c = 0.5 * (r1 + r2), hw = 0.5 * (r2 - r1);
    return compact(
        [=](double r) {
            const double xi = (r - c) / hw;
            const double q = 1.0 - xi * xi;
            return q <= 0.0 ? 0.0 : amplitude * std::exp(1.0 - 1.0 / q);
        },
        r1, r2);
}

RadialFunction RadialFunction::zero() {
    auto u = exponential([](double) { return 0.0; }, 1.0);
    u.zero_ = true;
    return u;
}

double RadialFunction::length_scale() const {
    switch (decay_) {
        case DecayClass::Compact: return 0.25 * (extent_ - inner_);
        case DecayClass::Exponential: return extent_ / 6.5;
        case DecayClass::PowerLaw: return 1.0;
    }
    return 1.0;
}

RadialFunction RadialFunction::scaled(double factor) const {
    RadialFunction u = *this;
    u.f_ = [f = f_, factor](double r) { return factor * f(r); };
    u.amplitude_ = amplitude_ * factor;
    u.zero_ = zero_ || factor == 0.0;
    return u;
}

bool RadialFunction::verify_decay() const {
    if (zero_) return true;
    double peak = 0.0;
    const double top = extent_;
    for (int i = 1; i <= 200; ++i) peak = std::max(peak, std::abs(f_(top * i / 200.0)));
    switch (decay_) {
        case DecayClass::Compact:
            for (double r : {0.5 * inner_, extent_ * 1.01, 1.5 * extent_, 3.0 * extent_})
                if (r > 0.0 && (r < inner_ || r > extent_) && f_(r) != 0.0) return false;
            return true;
        case DecayClass::Exponential:
            for (double r : {extent_, 1.5 * extent_, 3.0 * extent_})
                if (std::abs(f_(r)) > 1e-12 * peak) return false;
            return true;
        case DecayClass::PowerLaw: {
            const double p = exponent_;
            for (double r : {extent_, 2.0 * extent_}) {
                const double tail = amplitude_ * std::pow(r, -p);
                if (std::abs(f_(r) - tail) > 1e-3 * std::max(std::abs(tail), 1e-300) + 1e-14 * peak) return false;
            }
            return true;
        }
    }
    return false;
}

// --- RadialTransform ------------------------------------------------------

RadialTransform::RadialTransform(RadialFunction u, double rel_tol) : u_(std::move(u)) {
    if (u_.is_zero()) return;
    if (!u_.smooth()) throw RangeError("the transform quadrature needs a smooth profile");

    const bool power = u_.decay() == DecayClass::PowerLaw;
    const double a = u_.decay() == DecayClass::Compact ? u_.inner() : 0.0;
    const double b = u_.extent();
    const double p = u_.exponent(), amp = u_.amplitude();
    auto sample = [&](double r) {
        double v = u_(r);
        if (power) v -= amp * std::pow(1.0 + r * r, -0.5 * p);
        return v;
    };

    // The trapezoid rule in rho with step pi/K is exact up to aliasing from
    // frequencies above K, so K is doubled until the spectrum is negligible there.
    double K = 16.0 / u_.length_scale();
    for (int iter = 0;; ++iter) {
        const auto n = static_cast<std::size_t>(std::ceil((b - a) / (kPi / K)));
        h_ = (b - a) / double(n);
        rho_.clear();
        weighted_.clear();
        const std::size_t last = u_.decay() == DecayClass::Compact ? n - 1 : n;
        for (std::size_t j = 1; j <= last; ++j) {
            const double r = a + h_ * double(j);
            const double w = (j == n ? 0.5 : 1.0) * h_ * r * sample(r);
            rho_.push_back(r);
            weighted_.push_back(w);
        }
        kmax_ = K;
        // Rounding noise in the sum grows like k, so the test is against the
        // peak of k^2 |F| rather than an integral of it.
        double peak = 0.0, tail = 0.0;
        for (int i = 1; i <= 256; ++i) {
            const double k = K * i / 256.0;
            const double e = k * k * std::abs(remainder(k));
            peak = std::max(peak, e);
            if (k >= 0.5 * K) tail = std::max(tail, e);
        }
        if (tail <= rel_tol * peak || peak == 0.0) break;
        if (iter >= 14) throw ConvergenceError("RadialTransform: spectrum does not decay", tail / peak);
        K *= 2.0;
    }
    if (power) kmax_ = std::max(kmax_, 45.0);
}

double RadialTransform::remainder(double k) const {
    if (weighted_.empty()) return 0.0;
    if (k < 1e-8) {
        double s = 0.0;
        for (std::size_t j = 0; j < rho_.size(); ++j) s += weighted_[j] * rho_[j];
        return 4.0 * kPi * s;
    }
    // sum_j w_j sin(k rho_j) with rho_j equispaced: rotate a phasor, written
    // out by hand since std::complex multiplication carries NaN handling.
    const double cs = std::cos(k * h_), sn = std::sin(k * h_);
    double s = 0.0;
    for (std::size_t start = 0; start < rho_.size(); start += 256) {
        double c = std::cos(k * rho_[start]), v = std::sin(k * rho_[start]);
        const std::size_t stop = std::min(rho_.size(), start + 256);
        for (std::size_t j = start; j < stop; ++j) {
            s += weighted_[j] * v;
            const double c2 = c * cs - v * sn;
            v = v * cs + c * sn;
            c = c2;
        }
    }
    return 4.0 * kPi * s / k;
}

// Several frequencies at once: the per-frequency rotations are independent,
// so the inner loop vectorises.
void RadialTransform::remainder_block(const double* k, std::size_t count, double* out) const {
    constexpr std::size_t B = 16;
    for (std::size_t base = 0; base < count; base += B) {
        const std::size_t nb = std::min(B, count - base);
        double cs[B], sn[B], c[B], v[B], acc[B];
        for (std::size_t b = 0; b < B; ++b) {
            const double kk = b < nb ? k[base + b] : 0.0;
            cs[b] = std::cos(kk * h_);
            sn[b] = std::sin(kk * h_);
            acc[b] = 0.0;
        }
        for (std::size_t start = 0; start < rho_.size(); start += 256) {
            for (std::size_t b = 0; b < B; ++b) {
                const double kk = b < nb ? k[base + b] : 0.0;
                c[b] = std::cos(kk * rho_[start]);
                v[b] = std::sin(kk * rho_[start]);
            }
            const std::size_t stop = std::min(rho_.size(), start + 256);
            for (std::size_t j = start; j < stop; ++j) {
                const double w = weighted_[j];
                for (std::size_t b = 0; b < B; ++b) {
                    acc[b] += w * v[b];
                    const double c2 = c[b] * cs[b] - v[b] * sn[b];
                    v[b] = v[b] * cs[b] + c[b] * sn[b];
                    c[b] = c2;
                }
            }
        }
        for (std::size_t b = 0; b < nb; ++b) {
            const double kk = k[base + b];
            out[base + b] = kk < 1e-8 ? remainder(kk) : 4.0 * kPi * acc[b] / kk;
        }
    }
}

void RadialTransform::evaluate(std::span<const double> k, std::span<double> out) const {
    if (out.size() != k.size()) throw std::invalid_argument("RadialTransform::evaluate: size mismatch");
    if (u_.is_zero() || weighted_.empty()) {
        std::fill(out.begin(), out.end(), 0.0);
    } else {
        remainder_block(k.data(), k.size(), out.data());
    }
    if (u_.decay() == DecayClass::PowerLaw)
        for (std::size_t i = 0; i < k.size(); ++i) out[i] += analytic_part(k[i]);
}

double RadialTransform::analytic_part(double k) const {
    if (u_.decay() != DecayClass::PowerLaw || u_.amplitude() == 0.0) return 0.0;
    // (1 + r^2)^{-nu} in R^3 transforms to (2 pi)^{3/2} 2^{1-nu}/Gamma(nu) k^{nu-3/2} K_{3/2-nu}(k).
    const double nu = 0.5 * u_.exponent();
    return u_.amplitude() * std::pow(2.0 * kPi, 1.5) * std::pow(2.0, 1.0 - nu) / specfun::gamma(nu) *
           std::pow(k, nu - 1.5) * specfun::bessel_k_unbounded(1.5 - nu, k);
}

double RadialTransform::operator()(double k) const {
    if (u_.is_zero()) return 0.0;
    return remainder(k) + analytic_part(k);
}

std::vector<Estimate> RadialTransform::apply(const std::function<double(double)>& multiplier,
                                             std::span<const double> radii, double tol) const {
    std::vector<Estimate> out(radii.size());
    if (u_.is_zero() || radii.empty()) return out;
    double rmax = 0.0;
    for (double r : radii) {
        if (!(r > 0.0)) throw RangeError("evaluation radius must be positive");
        rmax = std::max(rmax, r);
    }
    const auto bp = k_breakpoints(kmax_, std::min(0.5, 3.0 / rmax));
    std::vector<double> nodes, wk, wg;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const auto panel = quad::kronrod15(bp[i], bp[i + 1]);
        std::array<double, 15> F;
        evaluate(panel.nodes, F);
        for (int q = 0; q < 15; ++q) {
            const double k = panel.nodes[q];
            const double g = k * multiplier(k) * F[q];
            nodes.push_back(k);
            wk.push_back(panel.kronrod[q] * g);
            wg.push_back(panel.gauss[q] * g);
        }
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        double vk = 0.0, vg = 0.0, mag = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const double sn = std::sin(nodes[q] * r);
            vk += wk[q] * sn;
            vg += wg[q] * sn;
            mag += std::abs(wk[q]);
        }
        const double norm = 1.0 / (2.0 * kPi * kPi * r);
        out[i] = {vk * norm, std::abs(vk - vg) * norm};
        if (std::abs(vk - vg) > tol * mag + 1e-300)
            throw ConvergenceError("RadialTransform::apply: panel error above tolerance", std::abs(vk - vg) / mag);
    }
    return out;
}

Estimate RadialTransform::homogeneous_norm_sq(double s) const {
    if (u_.is_zero()) return {};
    // Fixed Kronrod panels: the integrand has no oscillating factor, and the
    // noise-level tail would stall an adaptive scheme with a relative target.
    const auto bp = k_breakpoints(kmax_, 2.0);
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const auto panel = quad::kronrod15(bp[i], bp[i + 1]);
        std::array<double, 15> F;
        evaluate(panel.nodes, F);
        double vk = 0.0, vg = 0.0;
        for (int q = 0; q < 15; ++q) {
            const double k = panel.nodes[q];
            const double f = F[q];
            const double g = std::pow(k, 2.0 + 2.0 * s) * f * f;
            vk += panel.kronrod[q] * g;
            vg += panel.gauss[q] * g;
        }
        total += vk;
        err += std::abs(vk - vg);
    }
    const double c = 4.0 * kPi / std::pow(2.0 * kPi, 3);
    return {c * total, c * err};
}

// --- fractional powers ----------------------------------------------------

std::vector<Estimate> frac_power_radial(double s, double c, const RadialTransform& transform,
                                        std::span<const double> radii) {
    check_fraction(s);
    if (!(c >= 0.0)) throw RangeError("c must be nonnegative");
    return transform.apply([s, c](double k) { return std::pow(k * k + c, s); }, radii);
}

std::vector<Estimate> frac_power_radial(double s, double c, const RadialFunction& u, std::span<const double> radii) {
    check_fraction(s);
    if (u.is_zero()) return std::vector<Estimate>(radii.size());
    return frac_power_radial(s, c, RadialTransform(u), radii);
}

Estimate frac_power_radial(double s, double c, const RadialFunction& u, double r) {
    const double radii[1] = {r};
    return frac_power_radial(s, c, u, std::span<const double>(radii, 1))[0];
}

double relativistic_constant(int N, double s) {
    const double nu = 0.5 * (N + 2.0 * s);
    return std::pow(2.0, 1.0 - nu) * std::pow(kPi, -0.5 * N) * std::pow(2.0, 2.0 * s) * s * (1.0 - s) /
           specfun::gamma(2.0 - s);
}

Estimate relativistic_singular_integral(int N, double s, double m, const RadialFunction& phi, double r) {
    angular::check_problem(N, s);
    if (!(m > 0.0)) throw RangeError("the kernel form needs m > 0");
    if (!(r >= 0.0)) throw RangeError("radius must be nonnegative");
    const double nu = 0.5 * (N + 2.0 * s);
    const double ur = phi(r);
    if (phi.is_zero()) return {};

    // Spherical mean of phi over |y - x| = rho.
    quad::Rule<double> rule;
    if (N >= 2) rule = quad::gauss_jacobi<double>(64, 0.5 * (N - 3), 0.5 * (N - 3));
    double rule_mass = 0.0;
    for (double w : rule.weights) rule_mass += w;
    auto mean = [&](double rho) {
        if (N == 1) return 0.5 * (phi(r + rho) + phi(std::abs(r - rho)));
        if (r == 0.0) return phi(rho);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double c = 2.0 * rule.nodes[i] - 1.0;
            acc += rule.weights[i] * phi(std::sqrt(std::max(0.0, r * r + rho * rho + 2.0 * r * rho * c)));
        }
        return acc / rule_mass;
    };

    const double scale = phi.length_scale();
    // Laplacian of phi at |x| = r by finite differences, for the Taylor zone.
    const double hd = 1e-3 * scale;
    auto d2 = [&](double x) {
        auto f = [&](double t) { return phi(std::abs(t)); };
        return (-f(x + 2 * hd) + 16 * f(x + hd) - 30 * f(x) + 16 * f(x - hd) - f(x - 2 * hd)) / (12 * hd * hd);
    };
    double lap;
    if (r < 3.0 * hd) {
        lap = N * d2(0.0);
    } else {
        const double d1 = (-phi(r + 2 * hd) + 8 * phi(r + hd) - 8 * phi(r - hd) + phi(r - 2 * hd)) / (12 * hd);
        lap = d2(r) + (N - 1) / r * d1;
    }
    const double taylor_radius = 1e-3 * scale;
    auto kernel = [&](double rho) { return std::pow(rho, N - 1 - nu) * specfun::bessel_k_unbounded(nu, m * rho); };
    auto difference = [&](double rho) {
        if (rho < taylor_radius) return -rho * rho * lap / (2.0 * N);
        return ur - mean(rho);
    };

    quad::Options opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-14;
    opts.max_intervals = 2000;

    // Inner ball, with rho = rho0 t^{1/(2-2s)} flattening the rho^{1-2s} behaviour.
    const double rho0 = 0.1 * scale;
    const double q = 1.0 / (2.0 - 2.0 * s);
    auto inner = quad::integrate(
        [&](double t) {
            if (t <= 0.0) return 0.0;
            const double rho = rho0 * std::pow(t, q);
            const double jac = rho0 * q * std::pow(t, q - 1.0);
            return kernel(rho) * difference(rho) * jac;
        },
        0.0, 1.0, opts);

    std::vector<double> bp{rho0};
    const double top = r + phi.extent() + 60.0 / m;
    for (double edge : {phi.inner(), phi.extent()}) {
        for (double v : {std::abs(r - edge), r + edge})
            if (v > rho0 && v < top) bp.push_back(v);
    }
    for (double v = 2 * rho0; v < std::min(top, r + phi.extent()); v *= 2.0) bp.push_back(v);
    bp.push_back(top);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    auto outer = quad::integrate([&](double rho) { return kernel(rho) * difference(rho); }, bp, opts);

    const double pre = relativistic_constant(N, s) * std::pow(m, nu) * angular::sphere_area(N);
    const double value = pre * (inner.value + outer.value) + std::pow(m, 2.0 * s) * ur;
    const double err = std::abs(pre) * (inner.error + outer.error);
    if (!inner.converged || !outer.converged) {
        const double achieved = err / std::max(std::abs(value), 1e-300);
        if (achieved > 1e-6) throw ConvergenceError("relativistic_singular_integral: quadrature failed", achieved);
    }
    return {value, err};
}

Estimate relativistic_singular_integral(double s, double m, const RadialFunction& phi, std::span<const double> x) {
    if (x.empty()) throw RangeError("point must have at least one coordinate");
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return relativistic_singular_integral(static_cast<int>(x.size()), s, m, phi, std::sqrt(r2));
}

RadialFunction kelvin_transform(const RadialFunction& v, int N, double s) {
    if (N < 1) throw RangeError("dimension must be >= 1");
    check_fraction(s);
    const double e = 2.0 * s - N;
    auto f = [src = v.evaluator(), e](double r) { return std::pow(r, e) * src(1.0 / r); };
    if (v.decay() == DecayClass::Compact && v.inner() > 0.0)
        return RadialFunction::compact(f, 1.0 / v.extent(), 1.0 / v.inner(), v.smooth());
    const double p = N - 2.0 * s;
    const double at_origin = v(1e-300);
    const double extent = std::min(1e4, std::pow(10.0, 12.0 / (p + 2.0)));
    const bool smooth = v.smooth() && (v.decay() != DecayClass::PowerLaw || v.amplitude() == 0.0 ||
                                       std::abs(v.exponent() - p) < 1e-12);
    if (p > 0.0 && p < 3.0 && std::isfinite(at_origin)) return RadialFunction::power_law(f, p, at_origin, extent, smooth);
    return RadialFunction::exponential(f, extent, false);
}

double fit_decay_exponent(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 8) throw std::invalid_argument("fit_decay_exponent: need at least 8 samples");
    double rmin = INFINITY, rmax = 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [r, v] : samples) {
        if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("fit_decay_exponent: radii must be positive");
        if (!(std::abs(v) > 0.0) || !std::isfinite(v)) throw std::invalid_argument("fit_decay_exponent: values must be nonzero");
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        const double x = std::log(r), y = std::log(std::abs(v));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    if (rmax < 10.0 * rmin * (1 - 1e-12)) throw std::invalid_argument("fit_decay_exponent: samples must span a decade");
    const double n = double(samples.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace spectral_hardy::fracops
