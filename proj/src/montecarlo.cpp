#include "mumimo/montecarlo.hpp"

#include "mumimo/channel.hpp"
#include "mumimo/errors.hpp"
#include "mumimo/feedback.hpp"
#include "mumimo/kernels/inner_product.hpp"
#include "mumimo/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

namespace mumimo::mc {

namespace {

constexpr int kMaxAttempts = 64;

enum class Kind { Perfect, Analog, Tdd, Digital, Qam, MacAnalog, MacDigital };

// Everything that does not change from trial to trial.
struct Model {
    int m = 0;
    double snr = 0.0;
    double beta1 = 0.0;
    double beta_fb = 0.0;
    double gamma = 1.0;
    double beta_tdd = 0.0;
    bool is_static = true;
    double ut_error = 0.0; // used when the fading is time correlated
    Kind kind = Kind::Perfect;
    double bits = 0.0;
    RvqStrategy strategy = RvqStrategy::Distributional;
    double pe = 0.0;
    int group = 1;
    std::uint64_t seed = 0;
};

Model prepare(const SimConfig& c)
{
    const SystemParams& p = c.params;
    p.validate();
    if (c.trials < 1) throw DomainError("simulation needs at least one trial");
    if (p.m < 1) throw DomainError("simulation needs M >= 1");
    Model md;
    md.m = p.m;
    md.snr = p.snr;
    md.beta1 = p.beta1;
    md.beta_fb = c.scheme.resolved_beta_fb(p);
    md.gamma = p.gamma;
    md.seed = c.seed;
    md.is_static = std::holds_alternative<timecorr::BlockIid>(c.process) && p.delay == 0;
    if (!md.is_static) {
        const double delta = std::isinf(p.beta1) ? 0.0 : 1.0 / (p.beta1 * p.snr);
        md.ut_error = timecorr::delayed_estimate_error(c.process, delta, p.delay);
        if (!(md.ut_error < 1.0)) throw DomainError("no channel information survives the feedback delay");
    }

    if (c.scheme.is_envelope()) throw DomainError("simulation needs a fixed alpha; resolve the envelope first");
    const auto& k = c.scheme.kind;
    if (std::holds_alternative<scheme::Perfect>(k)) {
        md.kind = Kind::Perfect;
    } else if (std::holds_alternative<scheme::AnalogAwgn>(k)) {
        md.kind = Kind::Analog;
    } else if (const auto* t = std::get_if<scheme::Tdd>(&k)) {
        if (!md.is_static) throw DomainError("TDD is only simulated for static block fading");
        md.kind = Kind::Tdd;
        md.beta_tdd = t->beta_tdd.value_or(p.beta1);
    } else if (const auto* d = std::get_if<scheme::DigitalErrorFree>(&k)) {
        md.kind = Kind::Digital;
        md.bits = d->bits.value_or(symbol_feedback_bits(md.beta_fb, p.snr, p.m));
        md.strategy = d->strategy;
    } else if (const auto* q = std::get_if<scheme::DigitalQam>(&k)) {
        if (!md.is_static) throw DomainError("QAM feedback is only simulated for static block fading");
        md.kind = Kind::Qam;
        md.bits = qam_feedback_bits(q->alpha, p.snr, p.m);
        md.pe = qam_error_prob(p.snr, q->alpha, md.beta_fb, p.m, q->ser).message_error_prob;
    } else if (const auto* mac = std::get_if<scheme::MacAnalog>(&k)) {
        if (mac->l < 1 || mac->l > p.m || p.m % mac->l != 0)
            throw DomainError("simulated multiple-access feedback needs L dividing M");
        if (!std::isinf(p.beta_up)) throw DomainError("uplink channel estimation error is not simulated");
        md.kind = Kind::MacAnalog;
        md.group = mac->l;
    } else if (const auto* mac = std::get_if<scheme::MacDigital>(&k)) {
        if (!md.is_static) throw DomainError("digital multiple-access feedback is only simulated for static fading");
        if (mac->l < 1 || mac->l > p.m) throw DomainError("multiple-access feedback needs 1 <= L <= M");
        md.kind = Kind::MacDigital;
        md.bits = qam_feedback_bits(mac->alpha, p.snr, p.m);
        md.pe = mac_digital_error_prob(p.snr, mac->alpha, md.beta_fb, p.m);
    }
    return md;
}

struct TrialState {
    CMatrix h;
    CMatrix v;
};

// Draws one trial; returns false when the estimate was rank deficient.
bool draw(const Model& md, std::int64_t trial, std::uint64_t attempt, TrialState& st)
{
    const auto t = static_cast<std::uint64_t>(trial);
    Rng rng_ch(md.seed, t, Stream::Channel, attempt);
    Rng rng_tr(md.seed, t, Stream::TrainingNoise, attempt);
    Rng rng_fb(md.seed, t, Stream::FeedbackNoise, attempt);
    Rng rng_cb(md.seed, t, Stream::Codebook, attempt);
    Rng rng_err(md.seed, t, Stream::ErrorEvent, attempt);
    Rng rng_up(md.seed, t, Stream::Uplink, attempt);
    const int m = md.m;

    std::vector<std::vector<cplx>> ut(m);
    std::vector<double> ut_err(m);
    if (md.is_static) {
        st.h = sample_channel(m, m, rng_ch);
        for (int k = 0; k < m; ++k) {
            TrainingOutcome tr = common_training(st.h.col(k), md.beta1, md.snr, rng_tr);
            ut[k] = std::move(tr.estimate);
            ut_err[k] = tr.error_variance;
        }
    } else {
        // Joint Gaussian law of the channel and the user's estimate.
        st.h = CMatrix(m, m);
        const double a = std::sqrt(1.0 - md.ut_error);
        const double b = std::sqrt(md.ut_error);
        for (int k = 0; k < m; ++k) {
            ut[k].resize(m);
            for (int i = 0; i < m; ++i) {
                ut[k][i] = a * rng_ch.complex_normal();
                st.h(i, k) = ut[k][i] + b * rng_tr.complex_normal();
            }
            ut_err[k] = md.ut_error;
        }
    }

    CMatrix h_hat(m, m);
    auto put = [&](int k, const std::vector<cplx>& v) { std::copy(v.begin(), v.end(), h_hat.col(k).begin()); };
    switch (md.kind) {
    case Kind::Perfect:
        for (int k = 0; k < m; ++k) put(k, ut[k]);
        break;
    case Kind::Analog:
        for (int k = 0; k < m; ++k)
            put(k, analog_awgn_feedback(ut[k], ut_err[k], md.beta_fb, md.snr, md.gamma, rng_fb).bs_estimate);
        break;
    case Kind::Tdd:
        for (int k = 0; k < m; ++k) put(k, common_training(st.h.col(k), md.beta_tdd, md.snr, rng_fb).estimate);
        break;
    case Kind::Digital:
        for (int k = 0; k < m; ++k) put(k, rvq_quantize(ut[k], md.bits, md.strategy, rng_cb).codeword);
        break;
    case Kind::Qam:
    case Kind::MacDigital:
        for (int k = 0; k < m; ++k) {
            if (rng_err.uniform() < md.pe) put(k, random_unit_vector(m, rng_err));
            else put(k, rvq_quantize(ut[k], md.bits, RvqStrategy::Distributional, rng_cb).codeword);
        }
        break;
    case Kind::MacAnalog: {
        const int l = md.group;
        for (int g = 0; g < m / l; ++g) {
            CMatrix uplink = sample_channel(m, l, rng_up);
            std::span<const std::vector<cplx>> est(ut.data() + g * l, l);
            std::span<const double> err(ut_err.data() + g * l, l);
            const MacFeedbackOutcome fb = mac_analog_estimate(uplink, est, err, md.beta_fb, md.snr, rng_fb);
            for (int k = 0; k < l; ++k)
                std::copy(fb.bs_estimates.col(k).begin(), fb.bs_estimates.col(k).end(), h_hat.col(g * l + k).begin());
        }
        break;
    }
    }

    try {
        st.v = zf_beamformers(h_hat);
    } catch (const RankDeficiencyError&) {
        return false;
    }
    return true;
}

void draw_with_retry(const Model& md, std::int64_t trial, TrialState& st, std::int64_t& resamples)
{
    for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
        if (draw(md, trial, attempt, st)) return;
        ++resamples;
    }
    throw NumericalError("channel estimate stayed rank deficient after repeated redraws");
}

// |h_k^H v_j|^2 for all pairs, row-major in k.
void coupling_powers(const TrialState& st, kernels::SoaVectors& soa, std::vector<double>& out)
{
    const std::size_t m = st.v.cols();
    soa.resize(m, m);
    for (std::size_t j = 0; j < m; ++j) soa.set(j, st.v.col(j));
    out.resize(m * m);
    for (std::size_t k = 0; k < m; ++k)
        kernels::abs2_inner_products(st.h.col(k), soa, std::span<double>(out.data() + k * m, m));
}

} // namespace

EstimateWithCI run_trials(std::int64_t n, int workers, const std::function<double(std::int64_t)>& per_trial)
{
    if (n < 1) throw DomainError("run_trials: need at least one trial");
    const std::int64_t blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<RunningStats> partial(static_cast<std::size_t>(blocks));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= blocks) return;
            try {
                RunningStats s;
                const std::int64_t end = std::min(n, (b + 1) * kBlockSize);
                for (std::int64_t t = b * kBlockSize; t < end; ++t) s.add(per_trial(t));
                partial[static_cast<std::size_t>(b)] = s;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(blocks);
                return;
            }
        }
    };

    int threads = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = static_cast<int>(std::min<std::int64_t>(threads, blocks));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    RunningStats total;
    for (const RunningStats& s : partial) total.merge(s);
    EstimateWithCI e;
    e.mean = total.mean();
    e.std_error = total.std_error();
    e.ci95_halfwidth = total.ci95_halfwidth();
    e.trials = total.count();
    return e;
}

CMatrix simulate_trial_couplings(const SimConfig& config, std::int64_t trial, std::int64_t* resamples)
{
    const Model md = prepare(config);
    TrialState st;
    std::int64_t redraws = 0;
    draw_with_retry(md, trial, st, redraws);
    if (resamples) *resamples = redraws;
    return coupling_coefficients(st.h, st.v);
}

EstimateWithCI simulate_genie_rate(const SimConfig& config)
{
    const Model md = prepare(config);
    std::atomic<std::int64_t> resamples{0};
    const double s = md.snr / md.m;
    EstimateWithCI e = run_trials(config.trials, config.workers, [&](std::int64_t t) {
        thread_local TrialState st;
        thread_local kernels::SoaVectors soa;
        thread_local std::vector<double> pw;
        std::int64_t redraws = 0;
        draw_with_retry(md, t, st, redraws);
        if (redraws) resamples += redraws;
        coupling_powers(st, soa, pw);
        const int m = md.m;
        double total = 0.0;
        for (int k = 0; k < m; ++k) {
            double interference = 0.0;
            for (int j = 0; j < m; ++j)
                if (j != k) interference += pw[k * m + j];
            total += std::log1p(pw[k * m + k] * s / (1.0 + interference * s));
        }
        return total / (m * std::numbers::ln2);
    });
    e.resampled = resamples.load();
    return e;
}

EstimateWithCI estimate_cross_coupling(const SimConfig& config, int k, int j)
{
    const Model md = prepare(config);
    if (k < 0 || j < 0 || k >= md.m || j >= md.m) throw DomainError("estimate_cross_coupling: user index out of range");
    std::atomic<std::int64_t> resamples{0};
    EstimateWithCI e = run_trials(config.trials, config.workers, [&](std::int64_t t) {
        thread_local TrialState st;
        std::int64_t redraws = 0;
        draw_with_retry(md, t, st, redraws);
        if (redraws) resamples += redraws;
        return std::norm(dot_h(st.h.col(k), st.v.col(j)));
    });
    e.resampled = resamples.load();
    return e;
}

ConcavityCheck lemma2_property_check(const std::function<double(Rng&)>& sampler, double a, double lambda,
                                     std::int64_t trials, std::uint64_t seed)
{
    if (!(a >= 0.0)) throw DomainError("lemma2_property_check: A must be non-negative");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lemma2_property_check: lambda must lie in [0, 1]");
    auto lhs_of = [&](double x) { return std::log1p(x * a); };
    auto rhs_of = [&](double x) { return std::log1p((lambda + (1.0 - lambda) * x) * a); };
    auto draw_x = [&](std::int64_t t) {
        Rng rng(seed, static_cast<std::uint64_t>(t), Stream::Auxiliary);
        return sampler(rng);
    };
    ConcavityCheck c;
    c.lhs = run_trials(trials, 1, [&](std::int64_t t) { return lhs_of(draw_x(t)); });
    c.rhs = run_trials(trials, 1, [&](std::int64_t t) { return rhs_of(draw_x(t)); });
    c.difference = run_trials(trials, 1, [&](std::int64_t t) {
        const double x = draw_x(t);
        return rhs_of(x) - lhs_of(x);
    });
    return c;
}

} // namespace mumimo::mc
