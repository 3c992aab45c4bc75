#include "spectral_hardy/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "spectral_hardy/angular.hpp"
#include "spectral_hardy/classifier.hpp"
#include "spectral_hardy/extension.hpp"
#include "spectral_hardy/fracops.hpp"
#include "spectral_hardy/specfun.hpp"
#include "spectral_hardy/witness.hpp"

namespace spectral_hardy::verify {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string sci(double v) { return fmt("%.2e", v); }

struct Check {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok) { pass = pass && ok; }
};

// 1. mu_1(lambda(alpha)) = alpha^2 - ((N-2s)/2)^2.
constexpr double kOracleTol = 1e-6;
constexpr double kSolveSeconds = 2.0;

void closed_form_oracle(Check& c) {
    const std::pair<int, double> cases[] = {{3, 0.5}, {3, 0.75}, {2, 0.4}, {4, 0.3}};
    double worst = 0.0, slowest = 0.0;
    for (auto [N, s] : cases) {
        const double p = 0.5 * (N - 2.0 * s);
        for (double frac : {0.1, 0.25, 0.5, 0.75}) {
            const double alpha = frac * p;
            const auto t0 = Clock::now();
            const auto res = angular::mu1_constant(N, s, angular::lambda_of_alpha(N, s, alpha));
            slowest = std::max(slowest, since(t0));
            worst = std::max(worst, std::abs(res.mu1 - (alpha * alpha - p * p)));
            c.require(res.converged);
        }
    }
    c.require(worst <= kOracleTol && slowest < kSolveSeconds);
    c.detail << "max error " << sci(worst) << " <= " << sci(kOracleTol) << ", slowest solve " << fmt("%.2f", slowest)
             << " s < " << kSolveSeconds << " s";
}

// 2. lambda(1/2) values and kappa_{1/2}.
constexpr double kConstTol = 1e-12;

void closed_form_constants(Check& c) {
    double worst = std::abs(angular::critical_coupling(3, 0.5) - 0.5);
    worst = std::max(worst, std::abs(angular::lambda_of_alpha(3, 0.5, 0.5) - 0.5));
    for (int N = 3; N <= 6; ++N) {
        const double want = 0.5 * (N - 2);
        worst = std::max(worst, std::abs(angular::critical_coupling(N, 0.5) - want));
        worst = std::max(worst, std::abs(angular::lambda_of_alpha(N, 0.5, 0.5) - want));
    }
    const double kappa_err = std::abs(specfun::kappa_s(0.5) - 1.0);
    const double rounding = 4.0 * std::numeric_limits<double>::epsilon();
    c.require(worst <= kConstTol && kappa_err <= rounding);
    c.detail << "lambda error " << sci(worst) << " <= " << sci(kConstTol) << ", |kappa_1/2 - 1| = " << sci(kappa_err)
             << " <= " << sci(rounding);
}

// 3. esa flips between lambda(s) and lambda(s) + 1e-4.
constexpr double kThresholdStep = 1e-4;

void threshold_sharpness(Check& c) {
    const std::pair<int, double> cases[] = {{3, 0.5}, {3, 0.7}, {4, 0.4}};
    for (auto [N, s] : cases) {
        const double lam = angular::critical_coupling(N, s);
        const auto at = classifier::classify(N, s, 0.0, angular::CouplingDescriptor::constant(lam));
        const auto above = classifier::classify(N, s, 0.0, angular::CouplingDescriptor::constant(lam + kThresholdStep));
        const bool ok = at.esa == std::optional<bool>(true) && above.esa == std::optional<bool>(false);
        c.require(ok);
        c.detail << "(" << N << "," << s << "): margin " << sci(at.margin) << " -> " << sci(above.margin)
                 << (ok ? " flips; " : " NO FLIP; ");
    }
}

// 4. int P_m(t, .) = theta(m t).
constexpr double kMassTol = 1e-8;
constexpr double kMassSeconds = 5.0;

void kernel_mass(Check& c) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double s : {0.3, 0.5, 0.8})
        for (double t : {0.1, 0.5, 1.0, 2.0})
            for (double m : {0.5, 1.0, 2.0})
                worst = std::max(worst, std::abs(extension::kernel_mass(s, m, t).value -
                                                 specfun::theta_profile(s, m * t)));
    const double elapsed = since(t0);
    c.require(worst <= kMassTol && elapsed < kMassSeconds);
    c.detail << "max error " << sci(worst) << " <= " << sci(kMassTol) << " over s in {0.3,0.5,0.8}, "
             << fmt("%.2f", elapsed) << " s < " << kMassSeconds << " s";
}

// 5. Fourier multiplier vs singular integral for (-Delta + 1)^s on a Gaussian.
constexpr double kReprTol = 1e-4;

void representation_equivalence(Check& c) {
    const auto u = fracops::RadialFunction::gaussian();
    const fracops::RadialTransform F(u);
    const std::vector<double> radii{0.1, 0.35, 0.6, 0.85, 1.1, 1.35, 1.6, 2.25, 2.6, 3.0};
    double worst = 0.0;
    for (double s : {0.4, 0.6}) {
        const auto fourier = fracops::frac_power_radial(s, 1.0, F, radii);
        for (std::size_t i = 0; i < radii.size(); ++i) {
            const double direct = fracops::relativistic_singular_integral(3, s, 1.0, u, radii[i]).value;
            worst = std::max(worst, std::abs(fourier[i].value - direct) / std::abs(direct));
        }
    }
    c.require(worst <= kReprTol);
    c.detail << "max relative difference " << sci(worst) << " <= " << sci(kReprTol) << " (s = 0.4, 0.6; 10 radii)";
}

// 6. Witness properties for N = 3, s = 1/2, a = lambda(0.3).
constexpr double kOdeTol = 1e-8;
constexpr double kWeakTol = 1e-3;
constexpr double kControlRatio = 10.0;
constexpr double kTailTol = 0.02;
constexpr double kControlShift = 0.1;

void witness_suite(Check& c) {
    const int N = 3;
    const double s = 0.5;
    const double a = angular::lambda_of_alpha(N, s, 0.3);
    const auto coupling = angular::CouplingDescriptor::constant(a);
    const auto report = classifier::classify(N, s, 1.0, coupling);
    const auto phi = fracops::RadialFunction::bump(0.5, 2.0);
    for (double b : {0.5, 1.0, 4.0}) {
        const auto w = witness::build_witness(N, s, b, coupling);
        double ode = 0.0;
        for (double r = 1e-3; r <= 50.0; r *= 1.25)
            ode = std::max({ode, witness::radial_ode_residual(w, r), witness::companion_ode_residual(w, r)});
        const double couplings[] = {a, a + kControlShift};
        const auto weak = witness::weak_identity_residuals(w, phi, couplings);
        const auto l2 = witness::l2_membership(w);
        const double rate = witness::tail_decay_rate(w);
        const double tail_err = std::abs(rate / std::sqrt(b) - 1.0);
        const bool ok = ode <= kOdeTol && weak[0] <= kWeakTol && weak[1] >= kControlRatio * weak[0] && l2.in_l2 &&
                        report.esa.has_value() && l2.in_l2 == !*report.esa && tail_err <= kTailTol;
        c.require(ok);
        c.detail << "b=" << b << ": ode " << sci(ode) << ", weak " << sci(weak[0]) << " (control " << sci(weak[1])
                 << "), in_l2 " << (l2.in_l2 ? "true" : "false") << ", esa "
                 << (report.esa ? (*report.esa ? "true" : "false") : "null") << ", tail rate/sqrt(b)-1 "
                 << sci(tail_err) << "; ";
    }
}

// 7. gamma + alpha = -(N-2s), gamma alpha = -mu_1.
constexpr double kVietaTol = 1e-10;

void exponent_identities(Check& c) {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> dim(1, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    int done = 0;
    while (done < 100) {
        const int N = dim(rng);
        const double s = specfun::kMinS + (specfun::kMaxS - specfun::kMinS) * unit(rng);
        if (!(N > 2.0 * s)) continue;
        const double p = 0.5 * (N - 2.0 * s);
        const double mu1 = -p * p + (p * p + 4.0) * unit(rng);
        const auto [g, al] = classifier::decay_exponents(N, s, mu1);
        worst = std::max({worst, std::abs(g + al + (N - 2.0 * s)), std::abs(g * al + mu1)});
        ++done;
    }
    c.require(worst <= kVietaTol);
    c.detail << "max identity error " << sci(worst) << " <= " << sci(kVietaTol) << " over 100 samples";
}

// 8. Fourier solver for N = 2.
constexpr double kSingleModeTol = 1e-8;
constexpr double kQuotientSpread = 2.0;

void fourier_solver(Check& c) {
    double worst = 0.0;
    for (auto [s, a] : {std::pair{0.4, 0.3}, {0.4, -0.5}, {0.7, 0.1}}) {
        const auto four = angular::mu1_fourier(s, angular::CouplingDescriptor::fourier({{0, {a, 0.0}}}));
        const auto cons = angular::mu1_constant(2, s, a);
        worst = std::max(worst, std::abs(four.mu1 - cons.mu1));
    }
    const double s = 0.4, c0 = 0.3, c1 = 0.05;
    auto shifted = [&](double sigma) {
        return angular::mu1_fourier(s, angular::CouplingDescriptor::fourier({{0, {c0 - sigma, 0.0}}, {1, {c1, 0.0}}}))
            .mu1;
    };
    const double base = shifted(0.0);
    double prev = base, qmin = INFINITY, qmax = -INFINITY;
    bool increasing = true;
    for (double sigma : {0.1, 0.2, 0.4}) {
        const double v = shifted(sigma);
        increasing = increasing && v > prev;
        prev = v;
        const double q = (v - base) / sigma;
        qmin = std::min(qmin, q);
        qmax = std::max(qmax, q);
    }
    const bool bracket = qmin > 0.0 && qmax <= kQuotientSpread * qmin;
    c.require(worst <= kSingleModeTol && increasing && bracket);
    c.detail << "single-mode difference " << sci(worst) << " <= " << sci(kSingleModeTol) << "; mu1(a - sigma) "
             << (increasing ? "increasing" : "NOT increasing") << ", quotients in [" << fmt("%.6f", qmin) << ", "
             << fmt("%.6f", qmax) << "]";
}

// 9. Tail exponent of (-Delta)^s applied to a bump.
constexpr double kDecayTol = 0.05;

void bump_decay(Check& c) {
    const fracops::RadialTransform F(fracops::RadialFunction::bump(0.5, 2.0));
    std::vector<double> radii;
    for (int i = 0; i < 20; ++i) radii.push_back(5.0 * std::pow(10.0, i / 19.0));
    for (double s : {0.4, 0.6}) {
        const auto v = fracops::frac_power_radial(s, 0.0, F, radii);
        std::vector<std::pair<double, double>> samples;
        for (std::size_t i = 0; i < radii.size(); ++i) samples.emplace_back(radii[i], v[i].value);
        const double fitted = fracops::fit_decay_exponent(samples);
        const double want = -(3.0 + 2.0 * s);
        const double rel = std::abs(fitted / want - 1.0);
        c.require(rel <= kDecayTol);
        c.detail << "s=" << s << ": exponent " << fmt("%.4f", fitted) << " vs " << fmt("%.1f", want) << " (rel "
                 << sci(rel) << " <= " << kDecayTol << "); ";
    }
}

// 10. Kelvin transform.
constexpr double kIsometryTol = 1e-3;
constexpr double kInvolutionTol = 1e-14;

void kelvin(Check& c) {
    const int N = 3;
    const double s = 0.5;
    const auto u = fracops::RadialFunction::gaussian();
    const double n0 = std::sqrt(fracops::RadialTransform(u).homogeneous_norm_sq(s).value);
    const double n1 = std::sqrt(fracops::RadialTransform(fracops::kelvin_transform(u, N, s)).homogeneous_norm_sq(s).value);
    const double iso = std::abs(n1 / n0 - 1.0);
    double inv = 0.0;
    for (double g : {-2.5, -1.0, -0.3, 0.7, 1.9}) {
        const auto v = fracops::RadialFunction::exponential([g](double r) { return std::pow(r, g); }, 1.0, false);
        for (double sk : {0.3, 0.5, 0.8}) {
            const auto twice = fracops::kelvin_transform(fracops::kelvin_transform(v, N, sk), N, sk);
            for (double r = 1e-3; r < 1e3; r *= 1.7) inv = std::max(inv, std::abs(twice(r) / v(r) - 1.0));
        }
    }
    c.require(iso <= kIsometryTol && inv <= kInvolutionTol);
    c.detail << "norm ratio - 1 = " << sci(iso) << " <= " << sci(kIsometryTol) << ", involution error " << sci(inv)
             << " <= " << sci(kInvolutionTol);
}

struct Entry {
    const char* name;
    void (*run)(Check&);
};

const Entry kSuites[] = {
    {"closed-form oracle mu1(lambda(alpha))", closed_form_oracle},
    {"closed-form constants lambda(1/2), kappa_1/2", closed_form_constants},
    {"threshold sharpness", threshold_sharpness},
    {"kernel mass identity", kernel_mass},
    {"representation equivalence", representation_equivalence},
    {"witness suite", witness_suite},
    {"exponent identities", exponent_identities},
    {"N=2 Fourier solver", fourier_solver},
    {"bump tail decay", bump_decay},
    {"Kelvin isometry and involution", kelvin},
};

}  // namespace

int suite_count() { return static_cast<int>(std::size(kSuites)); }

std::string suite_name(int id) {
    if (id < 1 || id > suite_count()) throw std::out_of_range("no such suite");
    return kSuites[id - 1].name;
}

SuiteResult run_suite(int id) {
    SuiteResult out;
    out.id = id;
    out.name = suite_name(id);
    const auto t0 = Clock::now();
    Check c;
    try {
        kSuites[id - 1].run(c);
        out.pass = c.pass;
        out.detail = c.detail.str();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = c.detail.str() + "exception: " + e.what();
    }
    while (!out.detail.empty() && (out.detail.back() == ' ' || out.detail.back() == ';')) out.detail.pop_back();
    out.seconds = since(t0);
    return out;
}

std::vector<SuiteResult> run_suites(const std::vector<int>& ids, const std::function<void(const SuiteResult&)>& progress) {
    std::vector<int> todo = ids;
    if (todo.empty())
        for (int i = 1; i <= suite_count(); ++i) todo.push_back(i);
    std::vector<SuiteResult> out;
    for (int id : todo) {
        out.push_back(run_suite(id));
        if (progress) progress(out.back());
    }
    return out;
}

}  // namespace spectral_hardy::verify
