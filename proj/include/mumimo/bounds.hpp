#pragma once

#include "mumimo/params.hpp"
#include "mumimo/timecorr.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mumimo::bounds {

enum class Regime { Finite, HighSnrLimit };
enum class Growth { Bounded, LogLog, Logarithmic };

struct GapComponent {
    std::string name;
    double value = 0.0; // term inside log2(1 + sum)
};

struct GapBound {
    double gap_bits = 0.0;
    std::vector<GapComponent> components;
    Regime regime = Regime::Finite;
    Growth growth = Growth::Bounded;
    std::optional<double> snr_independent_bits; // valid at every snr
    std::optional<double> relaxed_bits;         // simpler closed form, never below gap_bits
    std::optional<double> high_snr_limit_bits;

    double component(const std::string& name) const;
};

// Per-user rate of zero-forcing with perfect channel knowledge and equal power, in bits.
double zf_ideal_rate(double snr, int m);

// Achievable rate R_ZF - gap, floored at zero.
double lower_rate(double snr, int m, double gap_bits);

// Unquantized feedback over an AWGN uplink (uplink power ratio gamma).
GapBound gap_analog_awgn(const SystemParams& p);
// Gap with perfect training, relaxed to log2(1 + 1/(gamma beta_fb)).
double analog_csir_gap(double beta_fb, double gamma = 1.0);

// Reciprocity-based channel estimation from beta_tdd M uplink pilot symbols.
GapBound gap_tdd(const SystemParams& p, double beta_tdd);

// Error-free random vector quantization with `bits` bits per user.
GapBound gap_digital(const SystemParams& p, double bits);
// Error-free feedback of beta_fb (M-1) log2(1 + snr) bits.
GapBound gap_digital_from_symbols(const SystemParams& p);

// Digital feedback with B = alpha (M-1) log2(snr) bits and message error probability pe.
GapBound gap_digital_errors(const SystemParams& p, double alpha, double pe);
// Rate lower bound when the user detects feedback errors and stays silent.
double lower_bound_with_detection(const SystemParams& p, double alpha, double pe);

GapBound gap_qam(const SystemParams& p, double alpha, QamSerMode mode = QamSerMode::Exact);
double lower_bound_qam_detect(const SystemParams& p, double alpha, QamSerMode mode = QamSerMode::Exact);
GapBound gap_mac_digital(const SystemParams& p, int l, double alpha);
double lower_bound_mac_digital_detect(const SystemParams& p, int l, double alpha);

enum class MmseMethod { Auto, ClosedForm, MonteCarlo };

struct WishartMmse {
    double rho = 0.0;
    int l = 0;
    int m = 0;
    double value = 0.0;
    double std_error = 0.0; // zero for the closed form
    MmseMethod method_used = MmseMethod::ClosedForm;
    std::string fallback_reason;
};

// (1/L) E tr (I + rho A^H A)^{-1} with A an M x L matrix of iid CN(0, 1) entries.
WishartMmse wishart_mmse(double rho, int l, int m, MmseMethod method = MmseMethod::Auto,
                         std::int64_t trials = 200000, std::uint64_t seed = 1);
double wishart_coefficient(int k, int ell, int mm, int l, int m);
// Limit of rho * mmse(rho): 1/(M-L) for L < M, and the log-growing form for L = M.
double wishart_rho_mmse_asymptote(double rho, int l, int m);

// Analog feedback over the multiple-access channel with groups of L users.
GapBound gap_mac_analog(const SystemParams& p, int l);

// L maximizing L (M - L), the group size minimizing the high-snr gap at a fixed
// total feedback budget a M channel uses.
int optimal_group_size(int m, double a);

// Three-term upper bound on the genie gap of analog multiple-access feedback when L = M.
double genie_gap_bound_mac_full(const SystemParams& p);

struct MacFullCertificate {
    std::vector<double> snr_db;
    std::vector<double> bound_bits;
    double supremum_bits = 0.0;
    double supremum_snr_db = 0.0;
    double tail_variation_bits = 0.0; // spread over the last `tail_db` decibels
};
MacFullCertificate certify_mac_full(const SystemParams& p, const std::vector<double>& snr_db, double tail_db = 20.0);

// Gap of a scheme when the user's estimate error is eps_d of the fading process
// (filtering for delay 0, one-step prediction for delay 1).
GapBound gap_with_prediction(const SystemParams& p, const timecorr::FadingProcess& process,
                             const FeedbackScheme& s);

// Closed-form gap of any scheme (fixed alpha for the digital error schemes).
GapBound scheme_gap(const SystemParams& p, const FeedbackScheme& s, const timecorr::FadingProcess& process);
std::optional<double> scheme_detect_lower(const SystemParams& p, const FeedbackScheme& s);

// Fraction of the frame left for data after downlink training (and TDD uplink pilots).
double frame_efficiency(const SystemParams& p, const FeedbackScheme& s, double frame_length);

} // namespace mumimo::bounds
