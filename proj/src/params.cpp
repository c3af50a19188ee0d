#include "mumimo/params.hpp"

#include "mumimo/errors.hpp"

#include <cmath>

namespace mumimo {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

void SystemParams::validate() const
{
    if (m < 1) throw DomainError("M must be >= 1");
    if (!(snr > 0.0) || !std::isfinite(snr)) throw DomainError("snr must be positive and finite");
    if (!(beta1 >= 1.0)) throw DomainError("beta1 must be >= 1");
    if (!(beta2 > 0.0)) throw DomainError("beta2 must be positive");
    if (!(beta_fb > 0.0)) throw DomainError("beta_fb must be positive");
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    if (!(beta_up > 0.0)) throw DomainError("beta_up must be positive");
    if (delay < 0) throw DomainError("delay must be non-negative");
}

namespace {
template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
} // namespace

std::string FeedbackScheme::name() const
{
    return std::visit(overloaded{
        [](const scheme::Perfect&) { return std::string("perfect"); },
        [](const scheme::AnalogAwgn&) { return std::string("analog"); },
        [](const scheme::Tdd&) { return std::string("tdd"); },
        [](const scheme::DigitalErrorFree&) { return std::string("digital"); },
        [](const scheme::DigitalQam&) { return std::string("qam"); },
        [](const scheme::MacAnalog&) { return std::string("mac-analog"); },
        [](const scheme::MacDigital&) { return std::string("mac-digital"); },
    }, kind);
}

int FeedbackScheme::group_size() const
{
    if (auto* s = std::get_if<scheme::MacAnalog>(&kind)) return s->l;
    if (auto* s = std::get_if<scheme::MacDigital>(&kind)) return s->l;
    return 0;
}

std::optional<double> FeedbackScheme::alpha() const
{
    if (auto* s = std::get_if<scheme::DigitalQam>(&kind)) return s->alpha;
    if (auto* s = std::get_if<scheme::MacDigital>(&kind)) return s->alpha;
    return std::nullopt;
}

const std::vector<double>* FeedbackScheme::alpha_grid() const
{
    if (auto* s = std::get_if<scheme::DigitalQam>(&kind)) return &s->alpha_grid;
    if (auto* s = std::get_if<scheme::MacDigital>(&kind)) return &s->alpha_grid;
    return nullptr;
}

bool FeedbackScheme::is_envelope() const
{
    const auto* g = alpha_grid();
    return g != nullptr && !g->empty();
}

FeedbackScheme FeedbackScheme::with_alpha(double a) const
{
    FeedbackScheme out = *this;
    if (auto* s = std::get_if<scheme::DigitalQam>(&out.kind)) {
        s->alpha = a;
        s->alpha_grid.clear();
    } else if (auto* s = std::get_if<scheme::MacDigital>(&out.kind)) {
        s->alpha = a;
        s->alpha_grid.clear();
    } else {
        throw DomainError("scheme " + name() + " has no alpha parameter");
    }
    return out;
}

std::vector<double> make_grid(double lo, double hi, double step)
{
    if (!(step > 0.0) || hi < lo) throw DomainError("grid needs step > 0 and hi >= lo");
    std::vector<double> g;
    const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    for (long long i = 0; i <= n; ++i) g.push_back(lo + static_cast<double>(i) * step);
    return g;
}

std::string to_string(BoundKind k)
{
    switch (k) {
    case BoundKind::Ideal: return "ideal";
    case BoundKind::GapBound: return "gap-bound";
    case BoundKind::Lower: return "lower";
    case BoundKind::LowerDetect: return "lower-detect";
    case BoundKind::GenieUpper: return "genie-upper";
    case BoundKind::Ceiling: return "ceiling";
    }
    return "unknown";
}

BoundKind bound_kind_from_string(const std::string& s)
{
    for (BoundKind k : {BoundKind::Ideal, BoundKind::GapBound, BoundKind::Lower, BoundKind::LowerDetect,
                        BoundKind::GenieUpper, BoundKind::Ceiling})
        if (to_string(k) == s) return k;
    throw DomainError("unknown bound kind: " + s);
}

} // namespace mumimo
