#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "spectral_hardy/errors.hpp"
#include "spectral_hardy/specfun.hpp"

using namespace spectral_hardy;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("gamma at integers and half integers") {
    CHECK(rel(specfun::gamma(5.0), 24.0) < 1e-14);
    CHECK(rel(specfun::gamma(0.5), std::sqrt(kPi)) < 1e-14);
    CHECK(rel(specfun::gamma(-0.5), -2.0 * std::sqrt(kPi)) < 1e-14);
}

TEST_CASE("gamma agrees with the Stirling series oracle") {
    CHECK(rel(specfun::gamma(1.25), oracle::stirling_gamma(1.25)) < 1e-13);
    for (double x = -39.7; x < 40.0; x += 0.61) {
        if (std::abs(x - std::round(x)) < 1e-3) continue;
        INFO("x = " << x);
        CHECK(rel(specfun::gamma(x), oracle::stirling_gamma(x)) < 1e-12);
    }
}

TEST_CASE("gamma poles and overflow") {
    CHECK_THROWS_AS(specfun::gamma(0.0), PoleError);
    CHECK_THROWS_AS(specfun::gamma(-3.0), PoleError);
    CHECK_THROWS_AS(specfun::gamma(180.0), OverflowError);
    CHECK(rel(specfun::log_gamma(50.5), std::lgamma(50.5)) < 1e-14);
}

TEST_CASE("bessel_k closed form and integral oracle") {
    CHECK(rel(specfun::bessel_k(0.5, 1.0), std::sqrt(kPi / 2.0) * std::exp(-1.0)) < 1e-14);
    CHECK(rel(specfun::bessel_k(2.3, 7.0), oracle::bessel_k_integral(2.3, 7.0)) < 1e-12);
    for (double nu : {0.0, 0.2, 1.0, 1.7, 3.5, 12.25, -2.4})
        for (double r : {1e-4, 0.03, 0.7, 2.0, 9.0, 35.0, 80.0}) {
            INFO("nu = " << nu << ", r = " << r);
            CHECK(rel(specfun::bessel_k(nu, r), oracle::bessel_k_integral(nu, r)) < 1e-11);
        }
}

TEST_CASE("bessel_k asymptotics") {
    // At r = 1e-4 the second small-r term is Gamma(-nu)/Gamma(nu) (r/2)^{2nu}
    // relative to the first, which exceeds 1e-3 for nu below about 0.35; at
    // r = 50 the first large-r correction (4 nu^2 - 1)/(8r) exceeds 1e-2 past
    // nu = 1.2.  The plain leading terms are checked where they are accurate,
    // the expansions with their next terms everywhere.
    for (double nu = 0.1; nu <= 3.0; nu += 0.3) {
        INFO("nu = " << nu);
        const double r = 1e-4;
        const double lead = 0.5 * specfun::gamma(nu) * std::pow(0.5 * r, -nu);
        const double small = specfun::bessel_k(nu, r) / lead;
        if (nu >= 0.4) CHECK(std::abs(small - 1.0) <= 1e-3);
        if (nu < 1.0) {
            const double second = specfun::gamma(-nu) / specfun::gamma(nu) * std::pow(0.5 * r, 2.0 * nu);
            CHECK(std::abs(small / (1.0 + second) - 1.0) <= 1e-3);
        }

        const double R = 50.0, mu = 4.0 * nu * nu;
        const double big = std::sqrt(kPi / (2.0 * R)) * std::exp(-R);
        const double ratio = specfun::bessel_k(nu, R) / big;
        if (nu <= 1.2) CHECK(std::abs(ratio - 1.0) <= 1e-2);
        const double series = 1.0 + (mu - 1.0) / (8.0 * R) + (mu - 1.0) * (mu - 9.0) / (2.0 * 64.0 * R * R);
        CHECK(std::abs(ratio / series - 1.0) <= 1e-3);
    }
}

TEST_CASE("bessel_k range checks") {
    CHECK_THROWS_AS(specfun::bessel_k(1.0, 0.0), RangeError);
    CHECK_THROWS_AS(specfun::bessel_k(1.0, 1e-7), RangeError);
    CHECK_THROWS_AS(specfun::bessel_k(1.0, 101.0), RangeError);
    CHECK_THROWS_AS(specfun::bessel_k(51.0, 1.0), RangeError);
}

TEST_CASE("bessel_i closed form and series oracle") {
    CHECK(rel(specfun::bessel_i(0.5, 1.0), std::sqrt(2.0 / kPi) * std::sinh(1.0)) < 1e-14);
    CHECK(rel(specfun::bessel_i(1.7, 3.0), oracle::bessel_i_series(1.7, 3.0)) < 1e-13);
    for (double nu : {0.0, 0.3, 1.0, 2.5, 7.0})
        for (double r : {1e-5, 0.1, 1.0, 4.0, 9.0}) {
            INFO("nu = " << nu << ", r = " << r);
            CHECK(rel(specfun::bessel_i(nu, r), oracle::bessel_i_series(nu, r)) < 1e-12);
        }
    const double r = 1e-5, nu = 1.3;
    CHECK(specfun::bessel_i(nu, r) * specfun::gamma(nu + 1.0) * std::pow(0.5 * r, -nu) == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("bessel derivatives") {
    const double expect = -0.25 * specfun::bessel_k(0.5, 2.0) - specfun::bessel_k(0.5, 2.0);
    CHECK(rel(specfun::bessel_k_derivative(0.5, 2.0), expect) < 1e-14);
    for (double nu : {0.0, 0.4, 1.5, 3.2})
        for (double r : {0.05, 0.8, 3.0, 12.0}) {
            auto k = [nu](double x) { return specfun::bessel_k(nu, x); };
            auto i = [nu](double x) { return specfun::bessel_i(nu, x); };
            CHECK(rel(specfun::bessel_k_derivative(nu, r), oracle::central_difference(k, r)) < 1e-6);
            CHECK(rel(specfun::bessel_i_derivative(nu, r), oracle::central_difference(i, r)) < 1e-6);
        }
    // Large r: K' ~ -K.
    CHECK(specfun::bessel_k_derivative(1.0, 10.0) / specfun::bessel_k(1.0, 10.0) == Approx(-1.0).epsilon(0.1));
}

TEST_CASE("theta profile") {
    for (double s : {0.05, 0.3, 0.5, 0.95}) CHECK(specfun::theta_profile(s, 0.0) == 1.0);
    for (double r : {0.1, 1.0, 4.0}) CHECK(rel(specfun::theta_profile(0.5, r), std::exp(-r)) < 1e-14);
    // Finite-difference residual of theta'' + ((1-2s)/r) theta' - theta at r = 2.
    const double s = 0.3, r = 2.0, h = 1e-4;
    auto th = [s](double x) { return specfun::theta_profile(s, x); };
    const double d2 = (th(r + h) - 2.0 * th(r) + th(r - h)) / (h * h);
    const double d1 = oracle::central_difference(th, r, h);
    CHECK(std::abs(d2 + (1.0 - 2.0 * s) / r * d1 - th(r)) < 1e-6);
    CHECK(rel(specfun::theta_derivative(s, r), oracle::central_difference(th, r)) < 1e-8);
}

TEST_CASE("kappa_s") {
    CHECK(specfun::kappa_s(0.5) == Approx(1.0).epsilon(1e-15));
    CHECK(rel(specfun::kappa_s(0.25), oracle::stirling_gamma(0.75) / (std::pow(2.0, -0.5) * oracle::stirling_gamma(0.25))) <
          1e-13);
    for (double s = 0.05; s <= 0.95; s += 0.05) CHECK(rel(specfun::kappa_s(s), oracle::kappa(s)) < 1e-12);
    CHECK_THROWS_AS(specfun::kappa_s(0.99), RangeError);
    CHECK_THROWS_AS(specfun::kappa_s(0.01), RangeError);
}
