#include "oracles.hpp"

#include "mumimo/errors.hpp"
#include "mumimo/specfun.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mumimo;

TEST_CASE("exponential integral matches quadrature")
{
    CHECK(specfun::exp_int(1, 1.0) == doctest::Approx(oracle::expint(1, 1.0)).epsilon(1e-9));
    CHECK(specfun::exp_int(2, 1.0) == doctest::Approx(oracle::expint(2, 1.0)).epsilon(1e-9));
    CHECK(specfun::exp_int(1, 1.0) == doctest::Approx(0.219384).epsilon(1e-5));
    CHECK(specfun::exp_int(2, 1.0) == doctest::Approx(0.148496).epsilon(1e-5));
    CHECK(specfun::exp_int(1, 0.4) == doctest::Approx(0.70238).epsilon(1e-5));

    for (int n : {1, 2, 3, 5}) {
        for (double x : {0.01, 0.3, 0.999, 1.001, 2.5, 7.0, 20.0}) {
            CAPTURE(n);
            CAPTURE(x);
            CHECK(specfun::exp_int(n, x) == doctest::Approx(oracle::expint(n, x)).epsilon(1e-8));
        }
    }
}

TEST_CASE("exponential integral recurrence and asymptotics")
{
    // E_{n+1}(x) = (e^{-x} - x E_n(x)) / n
    for (double x : {0.2, 1.0, 4.0}) {
        for (int n = 1; n < 6; ++n) {
            const double rec = (std::exp(-x) - x * specfun::exp_int(n, x)) / n;
            CHECK(specfun::exp_int(n + 1, x) == doctest::Approx(rec).epsilon(1e-12));
        }
    }
    // ratio to the leading term e^{-x}/x follows 1 - 1/x + 2/x^2 - 6/x^3 + 24/x^4 - ...
    const double x = 50.0;
    const double ratio = specfun::exp_int(1, x) / (std::exp(-x) / x);
    CHECK(ratio == doctest::Approx(1.0 - 1.0 / x + 2.0 / (x * x) - 6.0 / (x * x * x) + 24.0 / std::pow(x, 4)).epsilon(1e-6));
    CHECK(specfun::exp_int(1, 200.0) / (std::exp(-200.0) / 200.0) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(specfun::exp_int_scaled(1, 4e3) * 4e3 == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(specfun::exp_int_scaled(1, 0.4) == doctest::Approx(std::exp(0.4) * specfun::exp_int(1, 0.4)).epsilon(1e-14));
}

TEST_CASE("exponential integral domain")
{
    CHECK_THROWS_AS(specfun::exp_int(1, 0.0), DomainError);
    CHECK_THROWS_AS(specfun::exp_int(1, -1.0), DomainError);
    CHECK_THROWS_AS(specfun::exp_int(0, 1.0), DomainError);
    CHECK_THROWS_AS(specfun::exp_int(2, 0.0), DomainError);
    const auto r = specfun::exp_int_detailed(1, 1.0);
    CHECK(r.abs_error_estimate < 1e-12);
}

TEST_CASE("beta function")
{
    CHECK(specfun::beta_complete(2, 2) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    for (double b : {0.5, 1.0, 4.0 / 3.0, 7.0}) CHECK(specfun::beta_complete(1, b) == doctest::Approx(1.0 / b).epsilon(1e-13));
    for (double a : {0.7, 3.0, 16.0, 300.0}) {
        for (double b : {0.5, 4.0 / 3.0, 2.0, 9.5}) {
            CAPTURE(a);
            CAPTURE(b);
            CHECK(specfun::beta_complete(a, b) == doctest::Approx(oracle::beta(a, b)).epsilon(1e-11));
        }
    }
    // distortion bound 2^B B(2^B, M/(M-1)) <= 2^{-B/(M-1)}
    for (double bits : {4.0, 12.0, 40.0}) {
        const double n = std::exp2(bits);
        const double exact = std::exp(bits * std::numbers::ln2 + specfun::log_beta(n, 4.0 / 3.0));
        CHECK(exact <= std::exp2(-bits / 3.0));
        CHECK(exact > 0.0);
    }
    CHECK_THROWS_AS(specfun::beta_complete(0.0, 1.0), DomainError);
}

TEST_CASE("log beta stays accurate for huge first argument")
{
    // B(n, b) ~ Gamma(b) n^{-b}
    const double n = std::exp2(60.0);
    const double b = 4.0 / 3.0;
    const double asym = std::lgamma(b) - b * std::log(n);
    CHECK(specfun::log_beta(n, b) == doctest::Approx(asym).epsilon(1e-12));
}

TEST_CASE("log gamma")
{
    for (double x : {0.1, 0.5, 1.0, 2.5, 9.99, 10.0, 55.5, 1e6})
        CHECK(specfun::log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-12));
}

TEST_CASE("digamma")
{
    CHECK(specfun::digamma(1) == doctest::Approx(-0.577216).epsilon(1e-6));
    CHECK(specfun::digamma(1) == doctest::Approx(-specfun::kEulerGamma).epsilon(1e-14));
    CHECK(specfun::digamma(2) == doctest::Approx(1.0 - specfun::kEulerGamma).epsilon(1e-14));
    CHECK(specfun::digamma(4) == doctest::Approx(-specfun::kEulerGamma + 1.0 + 0.5 + 1.0 / 3.0).epsilon(1e-14));
    CHECK(specfun::digamma(4) == doctest::Approx(1.256118).epsilon(1e-6));
    for (double x : {0.3, 1.7, 6.0, 25.0}) CHECK(specfun::digamma(x) == doctest::Approx(oracle::digamma(x)).epsilon(1e-7));
    CHECK_THROWS_AS(specfun::digamma(0.0), DomainError);
}

TEST_CASE("Gaussian tail")
{
    CHECK(specfun::q_tail(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    for (double x : {0.5, 1.0, 3.0}) CHECK(specfun::q_tail(x) + specfun::q_tail(-x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(specfun::q_tail(1.0) == doctest::Approx(0.158655).epsilon(1e-6));
    for (double x : {-2.0, 0.25, 1.0, 2.0, 3.5}) CHECK(specfun::q_tail(x) == doctest::Approx(oracle::q_tail(x)).epsilon(1e-11));
}

TEST_CASE("Bessel J0")
{
    CHECK(specfun::bessel_j0(0.0) == 1.0);
    CHECK(specfun::bessel_j0(2.0 * std::numbers::pi * 0.0185) == doctest::Approx(0.9966).epsilon(5e-5));
    CHECK(std::abs(specfun::bessel_j0(2.404826)) < 1e-6);
    const double zero = oracle::bisect([](double x) { return oracle::bessel_j0(x); }, 2.0, 3.0);
    CHECK(std::abs(specfun::bessel_j0(zero)) < 1e-9);
    for (double x : {0.1, 1.0, 5.0, -3.0}) CHECK(specfun::bessel_j0(x) == doctest::Approx(oracle::bessel_j0(x)).epsilon(1e-10));
}

TEST_CASE("named evaluation")
{
    CHECK(specfun::evaluate("expint", {1, 1.0}).value == doctest::Approx(0.219384).epsilon(1e-5));
    CHECK(specfun::evaluate("beta", {2, 2}).value == doctest::Approx(1.0 / 6.0));
    CHECK(specfun::evaluate("j0", {0}).value == 1.0);
    CHECK_THROWS_AS(specfun::evaluate("nope", {1}), DomainError);
    CHECK_THROWS_AS(specfun::evaluate("beta", {1}), DomainError);
}
