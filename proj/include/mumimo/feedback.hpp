#pragma once

#include "mumimo/channel.hpp"
#include "mumimo/linalg.hpp"
#include "mumimo/params.hpp"
#include "mumimo/rng.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mumimo {

struct AnalogFeedbackOutcome {
    std::vector<cplx> bs_estimate;
    double error_variance = 0.0; // per-entry MMSE at the base station
};

// Unquantized feedback over an AWGN uplink with beta_fb * M channel uses and
// uplink SNR gamma * snr. The user sends its (normalized) channel estimate; the
// base station forms the linear MMSE estimate of the true channel.
AnalogFeedbackOutcome analog_awgn_feedback(std::span<const cplx> ut_estimate, double ut_error_variance,
                                           double beta_fb, double snr, double gamma, Rng& rng);
AnalogFeedbackOutcome analog_awgn_feedback(const TrainingOutcome& training, double beta_fb, double snr,
                                           double gamma, Rng& rng);

double analog_feedback_error_variance(double ut_error_variance, double beta_fb, double snr, double gamma = 1.0);

struct QuantizationOutcome {
    std::vector<cplx> codeword; // unit norm
    double distortion = 0.0;    // 1 - |h^H c|^2 / |h|^2
    std::size_t index = 0;      // codebook index (explicit strategy only)
};

// Random vector quantization of the channel direction with `bits` bits.
// Explicit: draws an isotropic codebook and searches it (integer bits <= 24).
// Distributional: draws the distortion from its exact law and builds a direction with it.
QuantizationOutcome rvq_quantize(std::span<const cplx> h_tilde, double bits, RvqStrategy strategy, Rng& rng);

inline constexpr int kMaxExplicitBits = 24;

struct RvqDistortion {
    double exact = 0.0; // 2^B * Beta(2^B, M/(M-1))
    double bound = 0.0; // 2^(-B/(M-1))
};
RvqDistortion rvq_expected_distortion(double bits, int m);

// Feedback bits carried by beta_fb (M-1) channel uses at rate log2(1 + snr).
double symbol_feedback_bits(double beta_fb, double snr, int m);
// Bits alpha (M-1) log2(snr) used by the uncoded QAM scheme.
double qam_feedback_bits(double alpha, double snr, int m);

struct FeedbackErrorModel {
    double constellation_size = 0.0;
    double symbol_error_prob = 0.0;
    double message_error_prob = 0.0;
    double message_error_union_bound = 0.0;
    double alpha = 0.0;
    double beta_fb = 0.0;
};

// Uncoded square QAM with q = snr^(alpha / beta_fb) points per symbol and
// beta_fb (M-1) symbols per feedback message.
FeedbackErrorModel qam_error_prob(double snr, double alpha, double beta_fb, int m,
                                  QamSerMode mode = QamSerMode::Exact);

struct MacFeedbackOutcome {
    CMatrix bs_estimates;                 // M x L, column k is the estimate of h_k
    std::vector<double> conditional_mmse; // per-user error variance given the uplink matrix
    CMatrix uplink;
};

// Analog feedback from L users sharing M x L uplink channel A (known at the base station).
MacFeedbackOutcome mac_analog_estimate(const CMatrix& uplink, std::span<const std::vector<cplx>> ut_estimates,
                                       std::span<const double> ut_error_variances, double beta_fb, double snr,
                                       Rng& rng);

// Optimal diversity-multiplexing tradeoff of an M-antenna receiver at multiplexing gain r.
double diversity_exponent(double r, int m);

// Coded digital feedback over the multiple-access channel: snr^(-d(alpha/beta_fb)), clamped to [0, 1].
double mac_digital_error_prob(double snr, double alpha, double beta_fb, int m);

} // namespace mumimo
