#include "mumimo/bounds.hpp"

#include "mumimo/errors.hpp"
#include "mumimo/feedback.hpp"
#include "mumimo/linalg.hpp"
#include "mumimo/rng.hpp"
#include "mumimo/specfun.hpp"
#include "mumimo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mumimo::bounds {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };

constexpr double kLn2 = std::numbers::ln2;

double inv(double beta) { return std::isinf(beta) ? 0.0 : 1.0 / beta; }
double training_error(double beta, double snr) { return std::isinf(beta) ? 0.0 : 1.0 / (1.0 + beta * snr); }
double log2_1p(double x) { return std::log1p(x) / kLn2; }

GapBound make_gap(std::vector<GapComponent> comps)
{
    double sum = 0.0;
    for (const auto& c : comps) sum += c.value;
    GapBound g;
    g.components = std::move(comps);
    g.gap_bits = log2_1p(sum);
    return g;
}

void check(const SystemParams& p)
{
    p.validate();
}

void check_multiuser(const SystemParams& p)
{
    check(p);
    if (p.m < 2) throw DomainError("this bound needs M >= 2");
}

GapBound analog_core(const SystemParams& p, double ut_error)
{
    const double snr = p.snr;
    const double m = p.m;
    const double sigma_e = analog_feedback_error_variance(ut_error, p.beta_fb, snr, p.gamma);
    return make_gap({{"dedicated", snr / m * training_error(p.beta2, snr)},
                     {"mismatch", snr * (m - 1.0) / m * sigma_e}});
}

GapBound digital_core(const SystemParams& p, double ut_error, double distortion)
{
    const double snr = p.snr;
    const double m = p.m;
    return make_gap({{"dedicated", snr / m * training_error(p.beta2, snr)},
                     {"csir", snr * (m - 1.0) / m * ut_error},
                     {"quantization", snr * (1.0 - ut_error) * distortion}});
}

double mac_rho(const SystemParams& p, int l)
{
    if (std::isinf(p.beta_fb)) return kPerfect;
    const double b = p.beta_fb * p.snr;
    if (std::isinf(p.beta_up)) return b;
    const double u = p.beta_up * p.snr;
    return u / (1.0 + u + l * b) * b;
}

double mmse_at(double rho, int l, int m) { return std::isinf(rho) ? 0.0 : wishart_mmse(rho, l, m).value; }

GapBound mac_core(const SystemParams& p, int l, double ut_error)
{
    if (l < 1 || l > p.m) throw DomainError("multiple-access feedback needs 1 <= L <= M");
    const double snr = p.snr;
    const double m = p.m;
    const double mmse = mmse_at(mac_rho(p, l), l, p.m);
    GapBound g = make_gap({{"dedicated", snr / m * training_error(p.beta2, snr)},
                           {"csir", snr * (m - 1.0) / m * ut_error},
                           {"feedback", snr * (m - 1.0) / m * (1.0 - ut_error) * mmse}});
    g.growth = l < p.m ? Growth::Bounded : Growth::LogLog;
    return g;
}

double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(int n, int k)
{
    if (k < 0 || k > n) return 0.0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

bool is_static(const timecorr::FadingProcess& proc, const SystemParams& p)
{
    return std::holds_alternative<timecorr::BlockIid>(proc) && p.delay == 0;
}

} // namespace

double GapBound::component(const std::string& name) const
{
    for (const auto& c : components)
        if (c.name == name) return c.value;
    throw DomainError("gap bound has no component named " + name);
}

double zf_ideal_rate(double snr, int m)
{
    if (!(snr >= 0.0)) throw DomainError("zf_ideal_rate: snr must be non-negative");
    if (m < 1) throw DomainError("zf_ideal_rate: M must be >= 1");
    if (snr == 0.0) return 0.0;
    return specfun::exp_int_scaled(1, m / snr) / kLn2;
}

double lower_rate(double snr, int m, double gap_bits) { return std::max(0.0, zf_ideal_rate(snr, m) - gap_bits); }

GapBound gap_analog_awgn(const SystemParams& p)
{
    check_multiuser(p);
    GapBound g = analog_core(p, training_error(p.beta1, p.snr));
    const double m = p.m;
    const double limit = log2_1p(inv(p.beta2) / m + (m - 1.0) / m * (inv(p.beta1) + inv(p.gamma * p.beta_fb)));
    g.snr_independent_bits = limit;
    g.relaxed_bits = limit;
    g.high_snr_limit_bits = limit;
    return g;
}

double analog_csir_gap(double beta_fb, double gamma)
{
    if (!(beta_fb > 0.0) || !(gamma > 0.0)) throw DomainError("analog_csir_gap: beta_fb and gamma must be positive");
    return log2_1p(inv(gamma * beta_fb));
}

GapBound gap_tdd(const SystemParams& p, double beta_tdd)
{
    check_multiuser(p);
    if (!(beta_tdd > 0.0)) throw DomainError("gap_tdd: beta_tdd must be positive");
    const double snr = p.snr;
    const double m = p.m;
    GapBound g = make_gap({{"dedicated", snr / m * training_error(p.beta2, snr)},
                           {"mismatch", snr * (m - 1.0) / m * training_error(beta_tdd, snr)}});
    const double limit = log2_1p(inv(p.beta2) / m + (m - 1.0) / m * inv(beta_tdd));
    g.snr_independent_bits = limit;
    g.relaxed_bits = limit;
    g.high_snr_limit_bits = limit;
    return g;
}

GapBound gap_digital(const SystemParams& p, double bits)
{
    check_multiuser(p);
    const RvqDistortion d = rvq_expected_distortion(bits, p.m);
    GapBound g = digital_core(p, training_error(p.beta1, p.snr), d.exact);
    const double m = p.m;
    g.relaxed_bits = log2_1p(inv(p.beta2) / m + (m - 1.0) / m * inv(p.beta1) + p.snr * d.bound);
    g.growth = Growth::Logarithmic;
    return g;
}

GapBound gap_digital_from_symbols(const SystemParams& p)
{
    check_multiuser(p);
    GapBound g = gap_digital(p, symbol_feedback_bits(p.beta_fb, p.snr, p.m));
    const double m = p.m;
    const double base = inv(p.beta2) / m + (m - 1.0) / m * inv(p.beta1);
    g.relaxed_bits = log2_1p(base + p.snr * std::pow(1.0 + p.snr, -p.beta_fb));
    if (p.beta_fb > 1.0) {
        g.growth = Growth::Bounded;
        g.high_snr_limit_bits = log2_1p(base);
    } else if (p.beta_fb == 1.0) {
        g.growth = Growth::Bounded;
        g.high_snr_limit_bits = log2_1p(base + std::tgamma(m / (m - 1.0)));
    }
    return g;
}

GapBound gap_digital_errors(const SystemParams& p, double alpha, double pe)
{
    check_multiuser(p);
    if (!(pe >= 0.0 && pe <= 1.0)) throw DomainError("gap_digital_errors: error probability outside [0, 1]");
    if (!(alpha >= 1.0)) throw DomainError("gap_digital_errors: alpha must be >= 1");
    const double m = p.m;
    const double snr = p.snr;
    GapBound g = make_gap({{"dedicated", inv(p.beta2) / m},
                           {"quantization", (1.0 - pe) * std::pow(snr, 1.0 - alpha)},
                           {"csir", (1.0 - pe) * (m - 1.0) / m * inv(p.beta1)},
                           {"error", snr * pe}});
    g.regime = Regime::HighSnrLimit;
    return g;
}

double lower_bound_with_detection(const SystemParams& p, double alpha, double pe)
{
    check_multiuser(p);
    if (!(pe >= 0.0 && pe <= 1.0)) throw DomainError("lower_bound_with_detection: error probability outside [0, 1]");
    const double m = p.m;
    const double gap = log2_1p(inv(p.beta2) / m + (m - 1.0) / m * inv(p.beta1) + std::pow(p.snr, 1.0 - alpha));
    return (1.0 - pe) * std::max(0.0, zf_ideal_rate(p.snr, p.m) - gap);
}

GapBound gap_qam(const SystemParams& p, double alpha, QamSerMode mode)
{
    check_multiuser(p);
    const double pe = qam_error_prob(p.snr, alpha, p.beta_fb, p.m, mode).message_error_prob;
    return gap_digital_errors(p, alpha, pe);
}

double lower_bound_qam_detect(const SystemParams& p, double alpha, QamSerMode mode)
{
    check_multiuser(p);
    const double pe = qam_error_prob(p.snr, alpha, p.beta_fb, p.m, mode).message_error_prob;
    return lower_bound_with_detection(p, alpha, pe);
}

GapBound gap_mac_digital(const SystemParams& p, int l, double alpha)
{
    check_multiuser(p);
    if (l < 1 || l > p.m) throw DomainError("multiple-access feedback needs 1 <= L <= M");
    return gap_digital_errors(p, alpha, mac_digital_error_prob(p.snr, alpha, p.beta_fb, p.m));
}

double lower_bound_mac_digital_detect(const SystemParams& p, int l, double alpha)
{
    check_multiuser(p);
    if (l < 1 || l > p.m) throw DomainError("multiple-access feedback needs 1 <= L <= M");
    return lower_bound_with_detection(p, alpha, mac_digital_error_prob(p.snr, alpha, p.beta_fb, p.m));
}

double wishart_coefficient(int k, int ell, int mm, int l, int m)
{
    const int d = m - l;
    const double sign = (mm % 2 == 0) ? 1.0 : -1.0;
    return sign * factorial(2 * ell) * factorial(d + mm)
           / (l * std::ldexp(1.0, 2 * k - mm) * factorial(ell) * factorial(mm) * factorial(d + ell))
           * binomial(2 * (k - ell), k - ell) * binomial(2 * (d + ell), 2 * ell - mm);
}

namespace {

constexpr int kMaxClosedFormL = 8;
constexpr double kCancellationLimit = 1e6;

WishartMmse wishart_monte_carlo(double rho, int l, int m, std::int64_t trials, std::uint64_t seed)
{
    if (trials < 2) throw DomainError("wishart_mmse: need at least 2 trials");
    RunningStats stats;
    for (std::int64_t t = 0; t < trials; ++t) {
        Rng rng(seed, static_cast<std::uint64_t>(t), Stream::Wishart);
        CMatrix a(m, l);
        for (cplx& z : a.data()) z = rng.complex_normal();
        CMatrix g = adjoint_times(a, a);
        for (cplx& z : g.data()) z *= rho;
        for (int i = 0; i < l; ++i) g(i, i) += 1.0;
        cholesky_inplace(g);
        double tr = 0.0;
        for (double v : cholesky_inverse_diagonal(g)) tr += v;
        stats.add(tr / l);
    }
    WishartMmse out;
    out.rho = rho;
    out.l = l;
    out.m = m;
    out.value = stats.mean();
    out.std_error = stats.std_error();
    out.method_used = MmseMethod::MonteCarlo;
    return out;
}

} // namespace

WishartMmse wishart_mmse(double rho, int l, int m, MmseMethod method, std::int64_t trials, std::uint64_t seed)
{
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("wishart_mmse: rho must be positive and finite");
    if (l < 1 || l > m) throw DomainError("wishart_mmse: need 1 <= L <= M");
    if (method == MmseMethod::MonteCarlo) return wishart_monte_carlo(rho, l, m, trials, seed);

    if (l >= kMaxClosedFormL) {
        WishartMmse out = wishart_monte_carlo(rho, l, m, trials, seed);
        out.fallback_reason = "closed form disabled for L >= 8; Monte Carlo used";
        return out;
    }
    const double x = 1.0 / rho;
    double sum = 0.0, abs_sum = 0.0;
    for (int k = 0; k < l; ++k)
        for (int ell = 0; ell <= k; ++ell)
            for (int mm = 0; mm <= 2 * ell; ++mm) {
                const double term = wishart_coefficient(k, ell, mm, l, m) * specfun::exp_int_scaled(m - l + mm + 1, x);
                sum += term;
                abs_sum += std::abs(term);
            }
    if (!(std::abs(sum) * kCancellationLimit > abs_sum)) {
        WishartMmse out = wishart_monte_carlo(rho, l, m, trials, seed);
        out.fallback_reason = "cancellation in the alternating sum; Monte Carlo used";
        return out;
    }
    WishartMmse out;
    out.rho = rho;
    out.l = l;
    out.m = m;
    out.value = sum / rho;
    out.method_used = MmseMethod::ClosedForm;
    return out;
}

double wishart_rho_mmse_asymptote(double rho, int l, int m)
{
    if (l < 1 || l > m) throw DomainError("wishart_rho_mmse_asymptote: need 1 <= L <= M");
    if (l < m) return 1.0 / (m - l);
    if (!(rho > 0.0)) throw DomainError("wishart_rho_mmse_asymptote: rho must be positive");
    double s = 0.0;
    for (int k = 0; k < l; ++k)
        for (int ell = 0; ell <= k; ++ell)
            for (int mm = 1; mm <= 2 * ell; ++mm) s += wishart_coefficient(k, ell, mm, l, m) / mm;
    return -specfun::kEulerGamma + std::log(rho) + s;
}

GapBound gap_mac_analog(const SystemParams& p, int l)
{
    check(p);
    GapBound g = mac_core(p, l, training_error(p.beta1, p.snr));
    if (l < p.m) {
        const double m = p.m;
        const double fb = (inv(p.beta_fb) + l * inv(p.beta_up)) / (m - l);
        g.high_snr_limit_bits = log2_1p(inv(p.beta2) / m + (m - 1.0) / m * (inv(p.beta1) + fb));
    }
    return g;
}

int optimal_group_size(int m, double a)
{
    if (m < 2) throw DomainError("optimal_group_size: need M >= 2");
    if (!(a > 0.0)) throw DomainError("optimal_group_size: feedback budget must be positive");
    int best = 1;
    for (int l = 2; l < m; ++l)
        if (l * (m - l) > best * (m - best)) best = l;
    return best;
}

double genie_gap_bound_mac_full(const SystemParams& p)
{
    check_multiuser(p);
    const double m = p.m;
    const double snr = p.snr;
    const double c1 = (m - 1.0) / m * inv(p.beta1);
    const double t1 = std::log1p(c1 + (m - 1.0) / m * snr);
    const double denom = 1.0 + (m - 1.0) / m * (inv(p.beta1) + snr);
    if (std::isinf(p.beta_fb)) return (t1 + std::log((1.0 + c1) / denom)) / kLn2;
    const double b = p.beta_fb * snr;
    const double k = (1.0 + c1) * b / denom;
    // E log(1 + c X) = exp(1/c) E1(1/c) for X ~ Exp(1).
    const double t2 = specfun::exp_int_scaled(1, 1.0 / k);
    const double t3 = specfun::exp_int_scaled(1, 1.0 / b);
    return (t1 + t2 - t3) / kLn2;
}

MacFullCertificate certify_mac_full(const SystemParams& p, const std::vector<double>& snr_db, double tail_db)
{
    if (snr_db.empty()) throw DomainError("certify_mac_full: empty grid");
    MacFullCertificate c;
    c.snr_db = snr_db;
    c.supremum_bits = -1.0;
    double tail_lo = INFINITY, tail_hi = -INFINITY;
    const double tail_start = snr_db.back() - tail_db;
    for (double db : snr_db) {
        SystemParams q = p;
        q.snr = db_to_linear(db);
        const double v = genie_gap_bound_mac_full(q);
        if (!std::isfinite(v)) throw NumericalError("certify_mac_full: non-finite bound");
        c.bound_bits.push_back(v);
        if (v > c.supremum_bits) {
            c.supremum_bits = v;
            c.supremum_snr_db = db;
        }
        if (db >= tail_start - 1e-9) {
            tail_lo = std::min(tail_lo, v);
            tail_hi = std::max(tail_hi, v);
        }
    }
    c.tail_variation_bits = tail_hi - tail_lo;
    return c;
}

GapBound gap_with_prediction(const SystemParams& p, const timecorr::FadingProcess& process, const FeedbackScheme& s)
{
    check_multiuser(p);
    SystemParams q = p;
    q.beta_fb = s.resolved_beta_fb(p);
    const double delta = std::isinf(p.beta1) ? 0.0 : 1.0 / (p.beta1 * p.snr);
    const double eps = timecorr::delayed_estimate_error(process, delta, p.delay);
    GapBound g = std::visit(overloaded{
        [&](const scheme::Perfect&) {
            q.beta_fb = kPerfect;
            return analog_core(q, eps);
        },
        [&](const scheme::AnalogAwgn&) { return analog_core(q, eps); },
        [&](const scheme::DigitalErrorFree& d) {
            const double bits = d.bits.value_or(symbol_feedback_bits(q.beta_fb, q.snr, q.m));
            return digital_core(q, eps, rvq_expected_distortion(bits, q.m).exact);
        },
        [&](const scheme::MacAnalog& mac) { return mac_core(q, mac.l, eps); },
        [&](const auto&) -> GapBound {
            throw DomainError("scheme " + s.name() + " is only modeled for static block fading without delay");
        },
    }, s.kind);
    if (p.delay > 0) g.growth = Growth::Logarithmic;
    return g;
}

GapBound scheme_gap(const SystemParams& p, const FeedbackScheme& s, const timecorr::FadingProcess& process)
{
    if (!is_static(process, p)) return gap_with_prediction(p, process, s);
    SystemParams q = p;
    q.beta_fb = s.resolved_beta_fb(p);
    return std::visit(overloaded{
        [&](const scheme::Perfect&) {
            q.beta_fb = kPerfect;
            return gap_analog_awgn(q);
        },
        [&](const scheme::AnalogAwgn&) { return gap_analog_awgn(q); },
        [&](const scheme::Tdd& t) { return gap_tdd(q, t.beta_tdd.value_or(q.beta1)); },
        [&](const scheme::DigitalErrorFree& d) {
            return d.bits ? gap_digital(q, *d.bits) : gap_digital_from_symbols(q);
        },
        [&](const scheme::DigitalQam& d) {
            if (!d.alpha_grid.empty()) throw DomainError("scheme_gap: resolve the alpha envelope first");
            return gap_qam(q, d.alpha, d.ser);
        },
        [&](const scheme::MacAnalog& mac) { return gap_mac_analog(q, mac.l); },
        [&](const scheme::MacDigital& mac) {
            if (!mac.alpha_grid.empty()) throw DomainError("scheme_gap: resolve the alpha envelope first");
            return gap_mac_digital(q, mac.l, mac.alpha);
        },
    }, s.kind);
}

std::optional<double> scheme_detect_lower(const SystemParams& p, const FeedbackScheme& s)
{
    SystemParams q = p;
    q.beta_fb = s.resolved_beta_fb(p);
    if (const auto* d = std::get_if<scheme::DigitalQam>(&s.kind)) return lower_bound_qam_detect(q, d->alpha, d->ser);
    if (const auto* d = std::get_if<scheme::MacDigital>(&s.kind)) return lower_bound_mac_digital_detect(q, d->l, d->alpha);
    return std::nullopt;
}

double frame_efficiency(const SystemParams& p, const FeedbackScheme& s, double frame_length)
{
    if (frame_length <= 0.0) return 1.0;
    double pilots = p.beta1;
    if (const auto* t = std::get_if<scheme::Tdd>(&s.kind)) pilots = t->beta_tdd.value_or(p.beta1);
    const double overhead = (pilots + p.beta2) * p.m;
    if (!std::isfinite(overhead)) throw DomainError("frame_efficiency: training lengths must be finite");
    return std::max(0.0, 1.0 - overhead / frame_length);
}

} // namespace mumimo::bounds
