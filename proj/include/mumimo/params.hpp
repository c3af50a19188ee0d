#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mumimo {

inline constexpr double kPerfect = std::numeric_limits<double>::infinity();

double db_to_linear(double db);
double linear_to_db(double x);

// Frame budget and link quality. Training/feedback lengths are in units of M
// symbols; an infinite value means the corresponding quantity is known exactly.
struct SystemParams {
    int m = 4;
    double snr = 1.0;          // linear P/N0
    double beta1 = kPerfect;   // common downlink training
    double beta2 = kPerfect;   // dedicated downlink training
    double beta_fb = 1.0;      // feedback channel uses
    double gamma = 1.0;        // uplink/downlink power ratio
    double beta_up = kPerfect; // uplink pilots for the multiple-access channel estimate
    int delay = 0;             // feedback delay in frames

    void validate() const;
};

enum class RvqStrategy { Explicit, Distributional };
enum class QamSerMode { Exact, Bound };

namespace scheme {

struct Perfect {};
struct AnalogAwgn {};
struct Tdd {
    std::optional<double> beta_tdd; // defaults to beta1
};
struct DigitalErrorFree {
    std::optional<double> bits;     // unset: as many bits as the feedback symbols carry
    RvqStrategy strategy = RvqStrategy::Distributional;
};
struct DigitalQam {
    double alpha = 1.0;
    std::vector<double> alpha_grid; // non-empty: report the envelope over this grid
    QamSerMode ser = QamSerMode::Exact;
};
struct MacAnalog {
    int l = 1;
};
struct MacDigital {
    int l = 1;
    double alpha = 1.0;
    std::vector<double> alpha_grid;
};

} // namespace scheme

using SchemeKind = std::variant<scheme::Perfect, scheme::AnalogAwgn, scheme::Tdd, scheme::DigitalErrorFree,
                                scheme::DigitalQam, scheme::MacAnalog, scheme::MacDigital>;

struct FeedbackScheme {
    SchemeKind kind;
    std::optional<double> beta_fb; // overrides SystemParams::beta_fb

    std::string name() const;
    double resolved_beta_fb(const SystemParams& p) const { return beta_fb.value_or(p.beta_fb); }
    int group_size() const;                      // L for the multiple-access schemes, else 0
    std::optional<double> alpha() const;         // fixed alpha of the digital schemes
    const std::vector<double>* alpha_grid() const;
    bool is_envelope() const;
    FeedbackScheme with_alpha(double alpha) const;
};

// Inclusive grid lo, lo+step, ..., hi with tolerance for rounding at the end point.
std::vector<double> make_grid(double lo, double hi, double step);

enum class BoundKind { Ideal, GapBound, Lower, LowerDetect, GenieUpper, Ceiling };

std::string to_string(BoundKind k);
BoundKind bound_kind_from_string(const std::string& s);

struct RateResult {
    std::string scheme;
    BoundKind kind = BoundKind::Ideal;
    double value_bits = 0.0;
    double ci95 = 0.0;
    long long trials = 0;
    unsigned long long seed = 0;
};

} // namespace mumimo
