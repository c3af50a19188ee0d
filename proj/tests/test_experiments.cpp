#include "mumimo/bounds.hpp"
#include "mumimo/errors.hpp"
#include "mumimo/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

using namespace mumimo;
using namespace mumimo::exp;

namespace {

std::string csv_of(const std::vector<ResultRow>& rows)
{
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
}

// Gap of uncoded QAM feedback with perfect training, straight from the error model.
double qam_gap_oracle(double snr, double alpha, double beta_fb, int m)
{
    const double q = std::pow(snr, alpha / beta_fb);
    if (q < 2.0) return INFINITY;
    const double t = 2.0 * (1.0 - 1.0 / std::sqrt(q)) * 0.5 * std::erfc(std::sqrt(3.0 * snr / (q - 1.0)) / std::sqrt(2.0));
    const double ps = 1.0 - (1.0 - t) * (1.0 - t);
    const double pe = 1.0 - std::pow(1.0 - ps, beta_fb * (m - 1));
    return std::log2(1.0 + (1.0 - pe) * std::pow(snr, 1.0 - alpha) + snr * pe);
}

SweepSpec closed_form_spec()
{
    SweepSpec s;
    s.axis_values = make_grid(0, 30, 2);
    s.fixed.beta_fb = 1.0;
    s.schemes = {{scheme::AnalogAwgn{}, std::nullopt}, {scheme::DigitalErrorFree{}, std::nullopt}};
    s.outputs = {BoundKind::Ideal, BoundKind::GapBound, BoundKind::Lower};
    return s;
}

} // namespace

TEST_CASE("closed-form sweep row count and zero intervals")
{
    const auto rows = run_sweep(closed_form_spec());
    CHECK(rows.size() == 96);
    for (const auto& r : rows) {
        CHECK(r.ci95 == 0.0);
        CHECK(r.trials == 0);
        CHECK(r.value_bits >= 0.0);
    }
    CHECK(rows.front().bound_kind == "ideal");
    CHECK(rows.front().snr_db == 0.0);
    CHECK(rows.back().snr_db == 30.0);
}

TEST_CASE("sweeps are deterministic and round-trip through CSV")
{
    SweepSpec s = closed_form_spec();
    s.axis_values = {0, 10, 20};
    s.outputs.push_back(BoundKind::GenieUpper);
    s.trials = 3000;
    s.seed = 5;
    const auto a = run_sweep(s);
    const auto b = run_sweep(s);
    CHECK(csv_of(a) == csv_of(b));

    std::istringstream in(csv_of(a));
    const auto back = read_csv(in);
    CHECK(back == a);

    std::istringstream bad("not,a,header\n");
    CHECK_THROWS_AS(read_csv(bad), IoError);
}

TEST_CASE("sweep specification round-trips through JSON")
{
    for (const auto& tag : figure_tags()) {
        const SweepSpec s = figure_preset(tag);
        const std::string text = sweep_to_json(s);
        CHECK(sweep_to_json(sweep_from_json(text)) == text);
    }
    CHECK_THROWS_AS(sweep_from_json("{"), IoError);
}

TEST_CASE("envelope over alpha")
{
    SystemParams p;
    p.m = 4;
    p.beta_fb = 2.0;
    scheme::DigitalQam q;
    const FeedbackScheme fixed{q, std::nullopt};

    // single-point grid reproduces the fixed-alpha evaluation
    SweepSpec one;
    one.fixed = p;
    one.axis_values = make_grid(8, 30, 2); // QAM needs snr^(alpha/beta_fb) >= 2
    one.outputs = {BoundKind::Lower, BoundKind::GapBound};
    one.schemes = {fixed};
    const auto direct = run_sweep(one);
    scheme::DigitalQam single = q;
    single.alpha_grid = {1.0};
    one.schemes = {{single, std::nullopt}};
    CHECK(run_sweep(one) == direct);

    const auto grid = make_grid(1.0, 2.0, 0.1);
    double last_alpha = 0.0;
    for (double db = 0; db <= 30; db += 2) {
        CAPTURE(db);
        p.snr = db_to_linear(db);
        const auto env = envelope_over_alpha(p, fixed, BoundKind::GapBound, grid, timecorr::BlockIid{}, 0, 1);
        double best = INFINITY, best_alpha = 0.0;
        for (double a : grid) {
            const double g = qam_gap_oracle(p.snr, a, 2.0, 4);
            if (g < best) {
                best = g;
                best_alpha = a;
            }
        }
        if (!std::isfinite(best)) {
            CHECK_FALSE(env.has_value());
            continue;
        }
        REQUIRE(env.has_value());
        CHECK(env->value == doctest::Approx(best).epsilon(1e-9));
        CHECK(env->best_alpha == doctest::Approx(best_alpha));
        for (double a : grid) {
            if (!std::isfinite(qam_gap_oracle(p.snr, a, 2.0, 4))) continue;
            CHECK(env->value <= bounds::gap_qam(p, a).gap_bits);
        }
        // The optimum first falls (error term dominates) and rises from 12 dB on.
        if (db >= 12) {
            CHECK(env->best_alpha >= last_alpha);
            last_alpha = env->best_alpha;
        }
    }
    CHECK(last_alpha > 1.2);
    CHECK_THROWS_AS(envelope_over_alpha(p, fixed, BoundKind::Lower, {}, timecorr::BlockIid{}, 0, 1), DomainError);
}

TEST_CASE("figure presets")
{
    const auto f2 = figure_preset("fig2");
    CHECK(f2.fixed.m == 4);
    CHECK(f2.fixed.beta_fb == 1.0);
    CHECK(f2.schemes.size() == 3);

    const auto f6 = figure_preset("fig6");
    REQUIRE(f6.schemes.size() == 2);
    const auto* ma = std::get_if<scheme::MacAnalog>(&f6.schemes[0].kind);
    const auto* md = std::get_if<scheme::MacDigital>(&f6.schemes[1].kind);
    REQUIRE(ma);
    REQUIRE(md);
    CHECK(ma->l == 2);
    CHECK(f6.schemes[0].beta_fb == 3.0);
    CHECK(md->l == 4);
    CHECK(md->alpha == 4.0);
    CHECK(f6.schemes[1].beta_fb == 8.0);

    const auto f8 = figure_preset("fig8");
    std::map<std::string, std::vector<double>> seen;
    for (const auto& pr : f8.processes) seen[timecorr::process_name(pr)].push_back(timecorr::process_param(pr));
    CHECK(seen["jakes"] == std::vector<double>{0.0056, 0.0185});
    CHECK(seen["gauss-markov"].size() == 2);
    CHECK(f8.fixed.delay == 1);

    CHECK_THROWS_AS(figure_preset("fig1"), DomainError);
}

TEST_CASE("preset rows respect lower <= genie <= ideal")
{
    for (const auto& tag : figure_tags()) {
        CAPTURE(tag);
        SweepSpec s = figure_preset(tag);
        if (s.trials > 0) s.trials = 1000;
        const auto rows = run_sweep(s);
        CHECK_FALSE(rows.empty());
        using Key = std::tuple<std::string, double, double, std::string, double, double>;
        std::map<Key, std::map<std::string, ResultRow>> by_point;
        for (const auto& r : rows) {
            CHECK(r.value_bits >= 0.0);
            by_point[{r.scheme, r.snr_db, r.beta_fb, r.process, r.process_param, r.beta1 + 1000.0 * r.l}][r.bound_kind] = r;
        }
        for (const auto& [key, kinds] : by_point) {
            const double ideal = kinds.at("ideal").value_bits;
            if (kinds.count("lower")) CHECK(kinds.at("lower").value_bits <= ideal + 1e-12);
            if (kinds.count("genie-upper")) {
                const auto& g = kinds.at("genie-upper");
                CHECK(g.value_bits - g.ci95 <= ideal);
                if (kinds.count("lower")) CHECK(kinds.at("lower").value_bits <= g.value_bits + g.ci95);
            }
        }
    }
}

TEST_CASE("sweep errors name the offending row")
{
    SweepSpec s;
    s.axis_values = {10};
    s.schemes = {{scheme::DigitalQam{}, std::nullopt}};
    s.processes = {timecorr::GaussMarkov{0.9}};
    s.outputs = {BoundKind::Lower};
    try {
        run_sweep(s);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        const std::string what = e.what();
        CHECK(what.find("scheme=qam") != std::string::npos);
        CHECK(what.find("snr_db=10") != std::string::npos);
    }
    SweepSpec empty;
    empty.schemes = s.schemes;
    empty.outputs = s.outputs;
    CHECK_THROWS_AS(run_sweep(empty), DomainError);
}

TEST_CASE("command-line value parsing")
{
    CHECK(parse_range("0:30:2").size() == 16);
    CHECK(parse_range("7.5") == std::vector<double>{7.5});
    CHECK_THROWS_AS(parse_range("1:2"), DomainError);
    CHECK_THROWS_AS(parse_range("a:b:c"), DomainError);
    CHECK(std::holds_alternative<timecorr::BlockIid>(parse_process("iid")));
    CHECK(std::get<timecorr::Jakes>(parse_process("jakes:0.0185")).doppler == 0.0185);
    CHECK(std::get<timecorr::GaussMarkov>(parse_process("gm:0.9")).r == 0.9);
    CHECK_THROWS_AS(parse_process("ar:2"), DomainError);
    CHECK_THROWS_AS(parse_process("table:/no/such/file"), IoError);
}
