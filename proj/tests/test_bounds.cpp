#include "oracles.hpp"

#include "mumimo/bounds.hpp"
#include "mumimo/errors.hpp"
#include "mumimo/feedback.hpp"
#include "mumimo/rng.hpp"
#include "mumimo/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mumimo;
using namespace mumimo::bounds;

namespace {

SystemParams params(int m, double snr, double b1, double b2, double bfb)
{
    SystemParams p;
    p.m = m;
    p.snr = snr;
    p.beta1 = b1;
    p.beta2 = b2;
    p.beta_fb = bfb;
    return p;
}

// E log(1 + c X), X ~ Exp(1), by quadrature in nats.
double log_exp_mean(double c)
{
    return oracle::simpson([&](double x) { return std::log1p(c * x) * std::exp(-x); }, 0.0, 60.0, 400000);
}

// (1/L) E tr(I + rho W)^{-1} for L = 1: E 1/(1 + rho X), X ~ Gamma(M, 1).
double mmse_single(double rho, int m)
{
    const double lg = std::lgamma(m);
    return oracle::simpson(
        [&](double x) { return x <= 0.0 ? (m == 1 ? 1.0 : 0.0) : std::exp((m - 1) * std::log(x) - x - lg) / (1.0 + rho * x); },
        0.0, 80.0, 400000);
}

} // namespace

TEST_CASE("ideal zero-forcing rate")
{
    CHECK(zf_ideal_rate(10.0, 4) == doctest::Approx(1.5118).epsilon(5e-5));
    CHECK(zf_ideal_rate(10.0, 4) == doctest::Approx(oracle::zf_rate(10.0, 4)).epsilon(1e-9));
    CHECK(zf_ideal_rate(1e-12, 4) < 1e-11);
    CHECK(zf_ideal_rate(0.0, 4) == 0.0);

    RunningStats r;
    for (std::uint64_t n = 0; n < 1000000; ++n) {
        Rng rng(1, n, Stream::Channel);
        r.add(std::log2(1.0 + std::norm(rng.complex_normal()) * 10.0 / 4.0));
    }
    CHECK(std::abs(r.mean() - zf_ideal_rate(10.0, 4)) < 3.0 * r.std_error());
    CHECK(lower_rate(10.0, 4, 100.0) == 0.0);
}

TEST_CASE("analog feedback gap")
{
    const auto p = params(4, 10.0, 1, 1, 1);
    const double s1 = 1.0 / 11.0;
    const double se = s1 + 10.0 / 121.0;
    const double inner = 1.0 + 2.5 * s1 + 7.5 * se;
    const GapBound g = gap_analog_awgn(p);
    CHECK(inner == doctest::Approx(2.528926).epsilon(1e-6));
    CHECK(g.gap_bits == doctest::Approx(std::log2(inner)).epsilon(1e-13));
    CHECK(g.gap_bits == doctest::Approx(1.3386).epsilon(1e-4));
    REQUIRE(g.high_snr_limit_bits);
    CHECK(*g.high_snr_limit_bits == doctest::Approx(std::log2(2.75)).epsilon(1e-12));
    REQUIRE(g.snr_independent_bits);
    for (double snr : {0.1, 1.0, 10.0, 1e3, 1e6}) CHECK(gap_analog_awgn(params(4, snr, 1, 1, 1)).gap_bits <= *g.snr_independent_bits + 1e-12);
    CHECK(gap_analog_awgn(params(4, 1e12, 1, 1, 1)).gap_bits == doctest::Approx(std::log2(2.75)).epsilon(1e-9));
    CHECK(analog_csir_gap(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gap_analog_awgn(params(4, 1e8, kPerfect, kPerfect, 1)).gap_bits <= analog_csir_gap(1.0) + 1e-12);
}

TEST_CASE("reciprocity gap")
{
    const auto p = params(4, 10.0, 1, 1, 1);
    CHECK(gap_tdd(p, 1.0).gap_bits == doctest::Approx(std::log2(1.0 + 2.5 * 4.0 / 11.0)).epsilon(1e-13));
    CHECK(gap_tdd(p, 1.0).gap_bits == doctest::Approx(0.9329).epsilon(1e-4));
}

TEST_CASE("error-free digital feedback gap")
{
    CHECK(gap_digital(params(2, 3.0, kPerfect, kPerfect, 1), 1.0).gap_bits == doctest::Approx(1.0).epsilon(1e-13));
    for (double db = 0; db <= 60; db += 5) {
        const double snr = db_to_linear(db);
        CHECK(gap_digital_from_symbols(params(4, snr, kPerfect, kPerfect, 1)).gap_bits <= 1.0 + 1e-12);
    }
    CHECK(gap_digital_from_symbols(params(4, 1e4, kPerfect, kPerfect, 2)).gap_bits < 0.002);
    // exact distortion never above the bound
    const GapBound g = gap_digital(params(4, 100.0, 1, 1, 1), 9.0);
    REQUIRE(g.relaxed_bits);
    CHECK(g.gap_bits <= *g.relaxed_bits);
}

TEST_CASE("digital feedback with errors")
{
    const auto perfect = params(4, 100.0, kPerfect, kPerfect, 4);
    const double alpha = 2.0;
    const double bits = alpha * 3.0 * std::log2(100.0);
    CHECK(gap_digital_errors(perfect, alpha, 0.0).gap_bits ==
          doctest::Approx(std::log2(1.0 + 100.0 * std::exp2(-bits / 3.0))).epsilon(1e-13));

    const GapBound q = gap_qam(perfect, 2.0, QamSerMode::Bound);
    const double pe = qam_error_prob(100.0, 2.0, 4.0, 4, QamSerMode::Bound).message_error_prob;
    CHECK(q.component("quantization") == doctest::Approx((1.0 - pe) * 0.01).epsilon(1e-12));
    CHECK(q.component("quantization") == doctest::Approx(0.01).epsilon(1e-4));
    CHECK(q.component("error") <= 7.35e-4);
    CHECK(q.gap_bits == doctest::Approx(0.0154).epsilon(2e-3));

    double prev = INFINITY;
    for (double db = 20; db <= 60; db += 2) {
        const double g = gap_qam(params(4, db_to_linear(db), kPerfect, kPerfect, 4), 2.0).gap_bits;
        CHECK(g < prev);
        prev = g;
    }
    CHECK(prev < 1e-3);

    const double detect = lower_bound_qam_detect(params(4, 100.0, kPerfect, kPerfect, 4), 2.0);
    CHECK(detect <= zf_ideal_rate(100.0, 4));
    CHECK(detect >= 0.0);
}

TEST_CASE("Wishart MMSE")
{
    const double e1 = oracle::expint(1, 1.0);
    CHECK(wishart_mmse(1.0, 1, 2).value == doctest::Approx(1.0 - std::numbers::e * e1).epsilon(1e-9));
    CHECK(wishart_mmse(1.0, 1, 2).value == doctest::Approx(0.40365).epsilon(1e-5));
    for (int m : {1, 2, 4, 6})
        for (double rho : {0.1, 1.0, 10.0, 100.0})
            CHECK(wishart_mmse(rho, 1, m, MmseMethod::ClosedForm).value == doctest::Approx(mmse_single(rho, m)).epsilon(1e-7));
    CHECK(wishart_mmse(1e-12, 2, 4).value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(1e6 * wishart_mmse(1e6, 2, 4).value == doctest::Approx(0.5).epsilon(0.01));
    CHECK(wishart_rho_mmse_asymptote(1e6, 2, 4) == doctest::Approx(0.5));

    const auto mc = wishart_mmse(10.0, 2, 4, MmseMethod::MonteCarlo, 200000, 3);
    CHECK(mc.method_used == MmseMethod::MonteCarlo);
    CHECK(std::abs(mc.value - wishart_mmse(10.0, 2, 4, MmseMethod::ClosedForm).value) < 3.0 * mc.std_error);

    const auto fallback = wishart_mmse(10.0, 9, 10, MmseMethod::Auto, 20000);
    CHECK(fallback.method_used == MmseMethod::MonteCarlo);
    CHECK_FALSE(fallback.fallback_reason.empty());
    CHECK_THROWS_AS(wishart_mmse(1.0, 3, 2), DomainError);
}

TEST_CASE("multiple-access analog feedback gap")
{
    auto p = params(4, 1e12, 1, 1, 1);
    const GapBound g = gap_mac_analog(p, 2);
    REQUIRE(g.high_snr_limit_bits);
    CHECK(*g.high_snr_limit_bits == doctest::Approx(std::log2(2.375)).epsilon(1e-12));
    CHECK(g.gap_bits == doctest::Approx(std::log2(2.375)).epsilon(1e-6));
    CHECK(g.growth == Growth::Bounded);
    CHECK(gap_mac_analog(p, 4).growth == Growth::LogLog);

    double prev = INFINITY;
    for (double bfb : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double v = gap_mac_analog(params(4, 100.0, 1, 1, bfb), 2).gap_bits;
        CHECK(v < prev);
        prev = v;
    }
    // L = 1 with one antenna: faded single-user feedback
    const auto single = params(1, 10.0, kPerfect, kPerfect, 1);
    CHECK(gap_mac_analog(single, 1).gap_bits >= 0.0);
    CHECK(optimal_group_size(4, 2.0) == 2);
    CHECK_THROWS_AS(gap_mac_analog(p, 5), DomainError);
}

TEST_CASE("three-term bound for full multiple-access groups")
{
    const auto p = params(4, 100.0, 1, kPerfect, 1);
    const double m = 4.0, snr = 100.0;
    const double c1 = 0.75;
    const double t1 = std::log1p(c1 + 0.75 * snr);
    const double denom = 1.0 + 0.75 * (1.0 + snr);
    const double b = snr;
    const double k = (1.0 + c1) * b / denom;
    const double oracle_bits = (t1 + log_exp_mean(k) - log_exp_mean(b)) / std::numbers::ln2;
    (void)m;
    CHECK(genie_gap_bound_mac_full(p) == doctest::Approx(oracle_bits).epsilon(1e-7));
    CHECK(genie_gap_bound_mac_full(p) == doctest::Approx(1.81).epsilon(0.01));

    const auto cert = certify_mac_full(p, make_grid(0, 80, 1), 10.0);
    CHECK(std::isfinite(cert.supremum_bits));
    CHECK(cert.tail_variation_bits < 0.01);
    CHECK(std::abs(cert.bound_bits.back() - cert.bound_bits[cert.bound_bits.size() - 2]) < 0.01);

    auto perfect_fb = p;
    perfect_fb.beta_fb = kPerfect;
    CHECK(std::isfinite(genie_gap_bound_mac_full(perfect_fb)));
}

TEST_CASE("multiple-access digital feedback gap")
{
    const auto p = params(4, 100.0, kPerfect, kPerfect, 8);
    const GapBound g = gap_mac_digital(p, 4, 4.0);
    CHECK(g.component("error") == doctest::Approx(100.0 * 1e-4).epsilon(1e-10));
    CHECK(lower_bound_mac_digital_detect(p, 4, 4.0) >= lower_rate(100.0, 4, g.gap_bits) - 1e-12);
}

TEST_CASE("regular-process ceiling")
{
    const double c01 = (std::log(1.0 / 0.1 + 1.0) - oracle::digamma(2.0) + 1.0 / 3.0 + 1.0 / 2.0) / std::numbers::ln2;
    CHECK(timecorr::regular_ceiling(2, 0.1) == doctest::Approx(c01).epsilon(1e-7));
    CHECK(timecorr::regular_ceiling(2, 0.1) == doctest::Approx(4.052).epsilon(2e-4));
    CHECK(timecorr::regular_ceiling(2, 1.0) == doctest::Approx(1.592).epsilon(2e-4));
    double prev = INFINITY;
    for (double e : {1e-9, 1e-6, 1e-3, 0.1, 0.5, 1.0}) {
        const double c = timecorr::regular_ceiling(4, e);
        CHECK(c < prev);
        prev = c;
    }
    CHECK(timecorr::regular_ceiling(4, 1e-12) > 35.0);
}

TEST_CASE("gap with time-correlated fading")
{
    const FeedbackScheme analog{scheme::AnalogAwgn{}, std::nullopt};
    const FeedbackScheme perfect{scheme::Perfect{}, std::nullopt};
    auto p = params(4, 10.0, 1, 1, 1);
    CHECK(gap_with_prediction(p, timecorr::BlockIid{}, analog).gap_bits == doctest::Approx(gap_analog_awgn(p).gap_bits).epsilon(1e-13));

    auto gm = params(4, 1.0, 1, kPerfect, kPerfect);
    gm.delay = 1;
    auto gap_at = [&](double db) {
        gm.snr = db_to_linear(db);
        return gap_with_prediction(gm, timecorr::GaussMarkov{0.9966}, perfect).gap_bits;
    };
    const double slope = (gap_at(100) - gap_at(80)) / 20.0;
    CHECK(slope == doctest::Approx(std::log2(10.0) / 10.0).epsilon(0.01));

    const FeedbackScheme qam{scheme::DigitalQam{}, std::nullopt};
    CHECK_THROWS_AS(gap_with_prediction(gm, timecorr::GaussMarkov{0.9}, qam), DomainError);
}

TEST_CASE("scheme dispatch")
{
    auto p = params(4, 100.0, kPerfect, kPerfect, 2);
    scheme::DigitalQam env;
    env.alpha_grid = {1.0, 1.5, 2.0};
    CHECK_THROWS_AS(scheme_gap(p, {env, std::nullopt}, timecorr::BlockIid{}), DomainError);
    CHECK_FALSE(scheme_detect_lower(p, {scheme::AnalogAwgn{}, std::nullopt}).has_value());
    CHECK(scheme_gap(p, {scheme::AnalogAwgn{}, 1.0}, timecorr::BlockIid{}).gap_bits ==
          doctest::Approx(gap_analog_awgn(params(4, 100.0, kPerfect, kPerfect, 1)).gap_bits));
}
