#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>

#include "oracles.hpp"
#include "spectral_hardy/angular.hpp"
#include "spectral_hardy/errors.hpp"

using namespace spectral_hardy;
using angular::CouplingDescriptor;

TEST_CASE("zero coupling has mu1 = 0") {
    for (int N : {2, 3, 4}) {
        const auto r = angular::mu1_constant(N, 0.5, 0.0);
        CHECK(std::abs(r.mu1) < 1e-12);
        CHECK(r.converged);
    }
}

TEST_CASE("mu1 at lambda(alpha) against alpha^2 - ((N-2s)/2)^2") {
    const auto r = angular::mu1_constant(3, 0.5, angular::lambda_of_alpha(3, 0.5, 0.3));
    CHECK(std::abs(r.mu1 + 0.91) < 1e-8);
    const std::pair<int, double> cases[] = {{3, 0.5}, {3, 0.75}, {2, 0.4}, {4, 0.3}};
    for (auto [N, s] : cases) {
        const double top = 0.5 * (N - 2.0 * s);
        for (double f : {0.1, 0.25, 0.5, 0.75}) {
            const double alpha = f * top;
            INFO("N = " << N << ", s = " << s << ", alpha = " << alpha);
            const auto m = angular::mu1_constant(N, s, angular::lambda_of_alpha(N, s, alpha));
            CHECK(std::abs(m.mu1 - (alpha * alpha - top * top)) <= 1e-6);
        }
    }
}

TEST_CASE("mu1 against the shooting oracle") {
    const double ref = oracle::AngularShooting(3, 0.5, -1.0).first_eigenvalue();
    const auto r = angular::mu1_constant(3, 0.5, -1.0);
    CHECK(r.mu1 > 0.0);
    CHECK(std::abs(r.mu1 - ref) < 1e-8);
    struct Case {
        int N;
        double s, a;
    };
    for (const Case c : {Case{3, 0.3, 0.2}, Case{2, 0.7, -0.4}, Case{4, 0.6, 1.1}, Case{3, 0.9, 0.05}}) {
        INFO("N = " << c.N << ", s = " << c.s << ", a = " << c.a);
        const double ref_c = oracle::AngularShooting(c.N, c.s, c.a).first_eigenvalue();
        CHECK(std::abs(angular::mu1_constant(c.N, c.s, c.a).mu1 - ref_c) < 1e-7);
    }
}

TEST_CASE("mu1 decreases in the coupling with a bounded difference quotient") {
    const double s = 0.4;
    double prev = angular::mu1_constant(3, s, -1.0).mu1;
    for (double a = -0.8; a <= 1.0; a += 0.2) {
        const double cur = angular::mu1_constant(3, s, a).mu1;
        CHECK(cur < prev);
        prev = cur;
    }
    const double a = 0.2, base = angular::mu1_constant(3, s, a).mu1;
    for (double sigma = 0.4; sigma > 0.01; sigma *= 0.5) {
        const double q = (angular::mu1_constant(3, s, a - sigma).mu1 - base) / sigma;
        CHECK(q > 0.5);
        CHECK(q < 3.0);
    }
}

TEST_CASE("Galerkin estimates decrease with the basis size") {
    double prev = INFINITY;
    for (std::size_t n : {4, 8, 16, 32, 64}) {
        angular::SpectralConfig cfg;
        cfg.basis_size = n;
        const double m = angular::mu1_constant(3, 0.35, 0.4, cfg).mu1;
        CHECK(m <= prev + 1e-12);
        prev = m;
    }
}

TEST_CASE("first eigenfunction is positive") {
    const auto r = angular::mu1_constant(3, 0.6, 0.7);
    REQUIRE(r.eigenfunction);
    CHECK(r.trace > 0.0);
    for (int i = 0; i <= 100; ++i) CHECK(r.eigenfunction(i / 100.0, 0.0) > 0.0);

    std::map<int, std::complex<double>> coeffs{{0, {0.2, 0.0}}, {1, {0.1, 0.05}}};
    const auto f = angular::mu1_fourier(0.45, CouplingDescriptor::fourier(coeffs));
    REQUIRE(f.eigenfunction);
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j < 16; ++j) CHECK(f.eigenfunction(i / 20.0, j * 2.0 * oracle::kPi / 16.0) > 0.0);
}

TEST_CASE("Fourier solver: single mode and small perturbations") {
    for (double c : {-0.5, 0.0, 0.3}) {
        const auto f = angular::mu1_fourier(0.4, CouplingDescriptor::fourier({{0, {c, 0.0}}}));
        CHECK(std::abs(f.mu1 - angular::mu1_constant(2, 0.4, c).mu1) <= 1e-8);
    }
    const double base = angular::mu1_constant(2, 0.4, 0.3).mu1;
    double prev_q = NAN;
    for (double eps = 0.08; eps > 0.015; eps *= 0.5) {
        const auto f = angular::mu1_fourier(0.4, CouplingDescriptor::fourier({{0, {0.3, 0.0}}, {1, {eps, 0.0}}}));
        const double d = std::abs(f.mu1 - base);
        // The first-order term vanishes (the mode-0 eigenfunction is orthogonal
        // to e^{i tau}), so the change is quadratic and well inside C eps.
        CHECK(d <= eps);
        if (!std::isnan(prev_q)) CHECK(d / (eps * eps) == doctest::Approx(prev_q).epsilon(0.1));
        prev_q = d / (eps * eps);
    }
}

TEST_CASE("Fourier solver: pointwise domination orders mu1") {
    const double c = 0.2, d = 0.1;
    const auto f = angular::mu1_fourier(0.4, CouplingDescriptor::fourier({{0, {c, 0.0}}, {1, {0.5 * d, 0.0}}}));
    CHECK(f.mu1 > angular::mu1_constant(2, 0.4, c + d).mu1);
    CHECK(f.mu1 < angular::mu1_constant(2, 0.4, c - d).mu1);
}

TEST_CASE("Fourier coupling file") {
    const char* path = "test_angular_coupling.txt";
    {
        std::ofstream f(path);
        f << "# constant plus cos(tau)\n0 0.25 0\n1 0.05 0\n";
    }
    const auto c = CouplingDescriptor::load_fourier_file(path);
    CHECK(c.coefficient(-1) == std::complex<double>(0.05, 0.0));
    CHECK(c.evaluate(0.0) == doctest::Approx(0.35));
    CHECK(c.mean() == doctest::Approx(0.25));
    std::remove(path);
    CHECK_THROWS(CouplingDescriptor::fourier({{1, {0.1, 0.0}}, {-1, {0.2, 0.0}}}));
    CHECK_THROWS(angular::mu1(3, 0.5, CouplingDescriptor::fourier({{0, {0.1, 0.0}}})));
}

TEST_CASE("lambda(alpha)") {
    CHECK(angular::lambda_of_alpha(3, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    for (int N = 3; N <= 6; ++N) CHECK(angular::lambda_of_alpha(N, 0.5, 0.5) == doctest::Approx((N - 2) / 2.0).epsilon(1e-13));
    double prev = INFINITY;
    for (double a = 0.01; a < 1.0; a += 0.05) {
        const double l = angular::lambda_of_alpha(3, 0.5, a);
        CHECK(l < prev);
        CHECK(std::abs(l - oracle::lambda_of_alpha(3, 0.5, a)) < 1e-12 * std::max(1.0, l));
        prev = l;
    }
    CHECK(angular::lambda_of_alpha(3, 0.5, 1.0 - 1e-9) < 1e-8);
    CHECK_THROWS_AS(angular::lambda_of_alpha(3, 0.5, 1.0), RangeError);
    CHECK_THROWS_AS(angular::lambda_of_alpha(3, 0.5, 0.0), RangeError);
}

TEST_CASE("alpha_of_lambda") {
    CHECK(angular::alpha_of_lambda(3, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    for (double a0 : {0.05, 0.3, 0.61, 0.9}) {
        const double lam = angular::lambda_of_alpha(3, 0.35, a0);
        const double a = angular::alpha_of_lambda(3, 0.35, lam);
        CHECK(std::abs(a - a0) < 1e-9);
        CHECK(std::abs(angular::lambda_of_alpha(3, 0.35, a) - lam) <= 1e-10);
    }
    const double ref = oracle::bisect([](double a) { return oracle::lambda_of_alpha(4, 0.3, a) - 0.2; }, 1e-12, 1.7 - 1e-12);
    CHECK(std::abs(angular::alpha_of_lambda(4, 0.3, 0.2) - ref) < 1e-10);
    CHECK_THROWS_AS(angular::alpha_of_lambda(3, 0.5, angular::lambda_endpoint(3, 0.5) + 0.01), RangeError);
    CHECK_THROWS_AS(angular::alpha_of_lambda(3, 0.5, -0.1), RangeError);
}

TEST_CASE("critical coupling") {
    CHECK(angular::critical_coupling(3, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(angular::critical_coupling(5, 0.5) == doctest::Approx(1.5).epsilon(1e-14));
    for (double s : {0.2, 0.4, 0.6})
        for (int N : {3, 4, 5}) {
            if (!(s < 0.5 * (N - 2.0 * s))) continue;
            CHECK(std::abs(angular::critical_coupling(N, s) - angular::lambda_of_alpha(N, s, s)) <= 1e-12);
        }
    CHECK_THROWS_AS(angular::critical_coupling(1, 0.3), RangeError);
    CHECK_THROWS_AS(angular::check_problem(1, 0.6), RangeError);
}
