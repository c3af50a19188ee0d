#include "mumimo/feedback.hpp"

#include "mumimo/errors.hpp"
#include "mumimo/kernels/inner_product.hpp"
#include "mumimo/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mumimo {

AnalogFeedbackOutcome analog_awgn_feedback(std::span<const cplx> ut_estimate, double ut_error_variance,
                                           double beta_fb, double snr, double gamma, Rng& rng)
{
    if (!(beta_fb > 0.0) || !(snr > 0.0) || !(gamma > 0.0))
        throw DomainError("analog_awgn_feedback: beta_fb, snr and gamma must be positive");
    if (!(ut_error_variance >= 0.0 && ut_error_variance <= 1.0))
        throw DomainError("analog_awgn_feedback: error variance must lie in [0, 1]");

    AnalogFeedbackOutcome out;
    const double kappa = 1.0 - ut_error_variance;
    if (std::isinf(beta_fb)) {
        out.bs_estimate.assign(ut_estimate.begin(), ut_estimate.end());
        out.error_variance = ut_error_variance;
        return out;
    }
    out.bs_estimate.assign(ut_estimate.size(), cplx(0.0, 0.0));
    if (kappa <= 0.0) {
        out.error_variance = 1.0;
        return out;
    }
    const double b = gamma * beta_fb * snr;
    const double tx = std::sqrt(b / kappa);             // scales the estimate to unit variance, then power b
    const double rx = std::sqrt(kappa * b) / (1.0 + b); // MMSE combiner
    for (std::size_t i = 0; i < ut_estimate.size(); ++i) {
        const cplx g = tx * ut_estimate[i] + rng.complex_normal();
        out.bs_estimate[i] = rx * g;
    }
    out.error_variance = analog_feedback_error_variance(ut_error_variance, beta_fb, snr, gamma);
    return out;
}

AnalogFeedbackOutcome analog_awgn_feedback(const TrainingOutcome& training, double beta_fb, double snr,
                                           double gamma, Rng& rng)
{
    return analog_awgn_feedback(training.estimate, training.error_variance, beta_fb, snr, gamma, rng);
}

double analog_feedback_error_variance(double ut_error_variance, double beta_fb, double snr, double gamma)
{
    if (std::isinf(beta_fb)) return ut_error_variance;
    const double b = gamma * beta_fb * snr;
    return 1.0 / (1.0 + b) + ut_error_variance * b / (1.0 + b);
}

namespace {

void check_bits(double bits)
{
    if (!(bits >= 0.0) || !std::isfinite(bits)) throw DomainError("rvq: bits must be finite and non-negative");
}

} // namespace

QuantizationOutcome rvq_quantize(std::span<const cplx> h_tilde, double bits, RvqStrategy strategy, Rng& rng)
{
    const int m = static_cast<int>(h_tilde.size());
    if (m < 2) throw DomainError("rvq_quantize: need M >= 2");
    check_bits(bits);
    const double h2 = norm_sq(h_tilde);
    if (!(h2 > 0.0)) throw DomainError("rvq_quantize: zero channel vector");

    QuantizationOutcome out;
    if (strategy == RvqStrategy::Explicit) {
        if (bits != std::floor(bits)) throw DomainError("rvq_quantize: explicit codebooks need integer bits");
        if (bits > kMaxExplicitBits) throw CapacityError("rvq_quantize: explicit codebook larger than 2^24");
        const std::size_t total = std::size_t{1} << static_cast<int>(bits);
        const std::size_t block_size = std::min<std::size_t>(total, 4096);
        kernels::SoaVectors block(m, block_size);
        std::vector<std::vector<cplx>> words(block_size);
        kernels::BestMatch best{0, -1.0};
        for (std::size_t base = 0; base < total; base += block_size) {
            const std::size_t n = std::min(block_size, total - base);
            if (n != block.count()) block.resize(m, n);
            for (std::size_t i = 0; i < n; ++i) {
                words[i] = random_unit_vector(m, rng);
                block.set(i, words[i]);
            }
            const kernels::BestMatch local = kernels::best_match(h_tilde, block);
            if (local.value > best.value) {
                best = {base + local.index, local.value};
                out.codeword = words[local.index];
            }
        }
        out.index = best.index;
        out.distortion = std::clamp(1.0 - best.value / h2, 0.0, 1.0);
        return out;
    }

    // Minimum of 2^B independent Beta(M-1, 1) variables, by inversion.
    const double u = rng.uniform();
    const double z = std::pow(-std::expm1(std::exp2(-bits) * std::log(u)), 1.0 / (m - 1));
    const double inv = 1.0 / std::sqrt(h2);
    std::vector<cplx> dir(h_tilde.begin(), h_tilde.end());
    for (cplx& c : dir) c *= inv;
    const std::vector<cplx> w = random_orthogonal_unit_vector(dir, rng);
    const double a = std::sqrt(1.0 - z);
    const double b = std::sqrt(z);
    out.codeword.resize(m);
    for (int i = 0; i < m; ++i) out.codeword[i] = a * dir[i] + b * w[i];
    out.distortion = z;
    return out;
}

RvqDistortion rvq_expected_distortion(double bits, int m)
{
    if (m < 2) throw DomainError("rvq_expected_distortion: need M >= 2");
    check_bits(bits);
    const double n = std::exp2(bits);
    const double shape = static_cast<double>(m) / (m - 1);
    return {std::exp(bits * std::numbers::ln2 + specfun::log_beta(n, shape)), std::exp2(-bits / (m - 1))};
}

double symbol_feedback_bits(double beta_fb, double snr, int m)
{
    if (m < 2) throw DomainError("feedback bits: need M >= 2");
    return beta_fb * (m - 1) * std::log2(1.0 + snr);
}

double qam_feedback_bits(double alpha, double snr, int m)
{
    if (m < 2) throw DomainError("feedback bits: need M >= 2");
    if (!(snr >= 1.0)) throw DomainError("QAM feedback needs snr >= 1");
    return alpha * (m - 1) * std::log2(snr);
}

FeedbackErrorModel qam_error_prob(double snr, double alpha, double beta_fb, int m, QamSerMode mode)
{
    if (m < 2) throw DomainError("qam_error_prob: need M >= 2");
    if (!(snr > 0.0) || !(beta_fb > 0.0) || !std::isfinite(beta_fb))
        throw DomainError("qam_error_prob: snr and beta_fb must be positive and finite");
    constexpr double slack = 1e-12;
    if (!(alpha >= 1.0 - slack) || !(alpha <= beta_fb * (1.0 + slack)))
        throw DomainError("qam_error_prob: alpha must lie in [1, beta_fb]");

    FeedbackErrorModel out;
    out.alpha = alpha;
    out.beta_fb = beta_fb;
    const double q = std::pow(snr, alpha / beta_fb);
    out.constellation_size = q;
    if (q < 2.0) throw DomainError("qam_error_prob: constellation has fewer than 2 points");

    double ps;
    if (mode == QamSerMode::Exact) {
        const double t = 2.0 * (1.0 - 1.0 / std::sqrt(q)) * specfun::q_tail(std::sqrt(3.0 * snr / (q - 1.0)));
        ps = t * (2.0 - t);
    } else {
        ps = 2.0 * std::exp(-1.5 * std::pow(snr, 1.0 - alpha / beta_fb));
    }
    ps = std::clamp(ps, 0.0, 1.0);
    const double symbols = beta_fb * (m - 1);
    out.symbol_error_prob = ps;
    out.message_error_prob = ps >= 1.0 ? 1.0 : -std::expm1(symbols * std::log1p(-ps));
    out.message_error_union_bound = symbols * ps;
    return out;
}

MacFeedbackOutcome mac_analog_estimate(const CMatrix& uplink, std::span<const std::vector<cplx>> ut_estimates,
                                       std::span<const double> ut_error_variances, double beta_fb, double snr,
                                       Rng& rng)
{
    const std::size_t m = uplink.rows();
    const std::size_t l = uplink.cols();
    if (l < 1 || l > m) throw DomainError("mac_analog_estimate: need 1 <= L <= M");
    if (ut_estimates.size() != l || ut_error_variances.size() != l)
        throw DomainError("mac_analog_estimate: one estimate per user required");
    if (!(beta_fb > 0.0) || !(snr > 0.0)) throw DomainError("mac_analog_estimate: beta_fb and snr must be positive");
    const std::size_t dim = ut_estimates[0].size();

    MacFeedbackOutcome out;
    out.uplink = uplink;
    out.bs_estimates = CMatrix(dim, l);
    out.conditional_mmse.assign(l, 0.0);
    if (std::isinf(beta_fb)) {
        for (std::size_t k = 0; k < l; ++k) {
            std::copy(ut_estimates[k].begin(), ut_estimates[k].end(), out.bs_estimates.col(k).begin());
            out.conditional_mmse[k] = ut_error_variances[k];
        }
        return out;
    }

    const double b = beta_fb * snr;
    const double amp = std::sqrt(b);
    std::vector<double> kappa(l);
    for (std::size_t k = 0; k < l; ++k) kappa[k] = std::max(0.0, 1.0 - ut_error_variances[k]);

    // Row k of `symbols` carries user k's normalized estimate across the `dim` channel uses.
    CMatrix symbols(l, dim);
    for (std::size_t k = 0; k < l; ++k) {
        const double s = kappa[k] > 0.0 ? amp / std::sqrt(kappa[k]) : 0.0;
        for (std::size_t j = 0; j < dim; ++j) symbols(k, j) = s * ut_estimates[k][j];
    }
    CMatrix received = multiply(uplink, symbols);
    for (cplx& z : received.data()) z += rng.complex_normal();

    CMatrix gram = adjoint_times(uplink, uplink);
    for (cplx& z : gram.data()) z *= b;
    for (std::size_t k = 0; k < l; ++k) gram(k, k) += 1.0;
    cholesky_inplace(gram);

    CMatrix x = adjoint_times(uplink, received);
    cholesky_solve(gram, x);
    const std::vector<double> inv_diag = cholesky_inverse_diagonal(gram);
    for (std::size_t k = 0; k < l; ++k) {
        const double c = std::sqrt(b * kappa[k]);
        for (std::size_t j = 0; j < dim; ++j) out.bs_estimates(j, k) = c * x(k, j);
        out.conditional_mmse[k] = ut_error_variances[k] + kappa[k] * inv_diag[k];
    }
    return out;
}

double diversity_exponent(double r, int m)
{
    if (r < 0.0) throw DomainError("diversity_exponent: negative multiplexing gain");
    return r >= 1.0 ? 0.0 : m * (1.0 - r);
}

double mac_digital_error_prob(double snr, double alpha, double beta_fb, int m)
{
    if (!(snr > 0.0)) throw DomainError("mac_digital_error_prob: snr must be positive");
    if (!(alpha >= 1.0)) throw DomainError("mac_digital_error_prob: alpha must be >= 1");
    if (!(alpha < beta_fb)) throw DomainError("mac_digital_error_prob: alpha must be below beta_fb");
    const double p = std::pow(snr, -diversity_exponent(alpha / beta_fb, m));
    return std::clamp(p, 0.0, 1.0);
}

} // namespace mumimo
