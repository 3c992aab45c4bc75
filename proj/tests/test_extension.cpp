#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "spectral_hardy/errors.hpp"
#include "spectral_hardy/extension.hpp"
#include "spectral_hardy/specfun.hpp"

using namespace spectral_hardy;
using fracops::RadialFunction;

TEST_CASE("kernel constant") {
    for (int N : {1, 2, 3})
        for (double s : {0.2, 0.5, 0.8}) {
            const double ref = std::pow(2.0, 1.0 - s) / (std::pow(2.0 * oracle::kPi, 0.5 * N) * oracle::stirling_gamma(s));
            CHECK(extension::kernel_constant(N, s) == doctest::Approx(ref).epsilon(1e-12));
        }
}

TEST_CASE("kernel mass equals theta(m t)") {
    for (double s : {0.3, 0.5, 0.8})
        for (double m : {0.5, 1.0, 3.0})
            for (double t : {0.05, 0.5, 2.0}) {
                INFO("s = " << s << ", m = " << m << ", t = " << t);
                CHECK(std::abs(extension::kernel_mass(s, m, t).value - specfun::theta_profile(s, m * t)) <= 1e-8);
            }
}

TEST_CASE("kernel vanishes like t^{2s} as t -> 0 away from the origin") {
    const double s = 0.4;
    double prev = INFINITY;
    for (double t = 1e-2; t > 1e-6; t *= 0.1) {
        const double p = extension::bessel_kernel(s, 1.0, t, 1.0);
        CHECK(p > 0.0);
        if (std::isfinite(prev)) CHECK(prev / p == doctest::Approx(std::pow(10.0, 2.0 * s)).epsilon(0.01));
        prev = p;
    }
}

TEST_CASE("kernel decays like exp(-m |z|) in m") {
    // log P = c - |z| m + beta log m for large m.
    const double s = 0.4, t = 0.7, rho = 1.1, z = std::hypot(t, rho);
    const int n = 21;
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const double m = 20.0 + i;
        A(i, 0) = 1.0;
        A(i, 1) = m;
        A(i, 2) = std::log(m);
        y(i) = std::log(extension::bessel_kernel(s, m, t, rho));
    }
    const double rate = -A.colPivHouseholderQr().solve(y)(1);
    CHECK(rate == doctest::Approx(z).epsilon(1e-3));
}

TEST_CASE("convolution and Fourier routes agree") {
    const auto u = RadialFunction::gaussian();
    const fracops::RadialTransform F(u);
    const std::vector<double> radii{0.1, 0.5, 1.0, 2.0, 3.5};
    for (double s : {0.3, 0.5, 0.8})
        for (double t : {0.05, 0.5, 2.0}) {
            const auto four = extension::extend_radial_fourier(F, s, 1.0, t, radii);
            for (std::size_t i = 0; i < radii.size(); ++i) {
                INFO("s = " << s << ", t = " << t << ", r = " << radii[i]);
                CHECK(std::abs(extension::extend_radial(u, s, 1.0, t, radii[i]) - four[i].value) <= 1e-6);
            }
        }
}

TEST_CASE("approximate identity as t -> 0") {
    // w(t) - u = -kappa_s t^{2s}/(2s) (-Delta+m^2)^s u + O(t^2): the raw gap
    // shrinks only like t^{2s}, the corrected one like t^2.
    const auto u = RadialFunction::gaussian();
    for (double s : {0.3, 0.5, 0.8})
        for (double r : {0.0, 1.0}) {
            INFO("s = " << s << ", r = " << r);
            const double L = fracops::frac_power_radial(s, 1.0, u, std::max(r, 1e-6)).value;
            auto gap = [&](double t) {
                const double w = extension::extend_radial(u, s, 1.0, t, r);
                return std::pair{w - u(r), w - (u(r) - specfun::kappa_s(s) * L * std::pow(t, 2 * s) / (2 * s))};
            };
            const auto [raw3, corr3] = gap(1e-3);
            const auto [raw4, corr4] = gap(1e-4);
            CHECK(std::abs(corr3) <= 1e-4);
            CHECK(raw3 / raw4 == doctest::Approx(std::pow(10.0, 2 * s)).epsilon(0.06));
            CHECK(corr3 / corr4 == doctest::Approx(100.0).epsilon(0.05));
        }
    CHECK(std::abs(extension::extend_radial(u, 0.5, 1.0, 1e-5, 0.0) - 1.0) <= 1e-4);
    CHECK(extension::extend_radial(RadialFunction::zero(), 0.5, 1.0, 0.3, 1.0) == 0.0);
}

TEST_CASE("PDE residual") {
    const auto w = extension::ExtensionField::of(RadialFunction::gaussian(), 0.5, 1.0);
    const auto r = extension::pde_residual(w, 1.0, 1.0, 1e-3);
    CHECK(std::abs(r.value) <= 1e-4 * r.scale);
    const auto c = extension::pde_residual(w, 1.0, 1.0, 0.05);
    const auto f = extension::pde_residual(w, 1.0, 1.0, 0.025);
    CHECK(c.value / f.value == doctest::Approx(4.0).epsilon(0.05));

    const auto p = extension::ExtensionField::profile(0.3, 1.5);
    CHECK(std::abs(extension::pde_residual(p, 0.8, 1.0, 1e-3).value) <= 1e-6);
    CHECK_THROWS_AS(extension::pde_residual(w, 1e-3, 1.0, 1e-3), RangeError);
}

TEST_CASE("boundary flux") {
    const auto u = RadialFunction::gaussian();
    const auto f = extension::boundary_flux_check(u, 0.5, 1.0, 1.0);
    CHECK(std::abs(f.lhs - f.rhs) <= 1e-3 * std::max(1.0, std::abs(f.rhs)));
    const double rhs = specfun::kappa_s(0.5) * fracops::frac_power_radial(0.5, 1.0, u, 1.0).value;
    CHECK(f.rhs == doctest::Approx(rhs).epsilon(1e-12));
    for (double s : {0.3, 0.7}) {
        const auto g = extension::boundary_flux_check(u, s, 2.0, 0.6);
        CHECK(std::abs(g.lhs - g.rhs) <= 1e-3 * std::max(1.0, std::abs(g.rhs)));
    }
    const auto z = extension::boundary_flux_check(RadialFunction::zero(), 0.5, 1.0, 1.0);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
}
