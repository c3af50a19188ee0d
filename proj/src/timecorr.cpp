#include "mumimo/timecorr.hpp"

#include "mumimo/errors.hpp"
#include "mumimo/quadrature.hpp"
#include "mumimo/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mumimo::timecorr {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };

constexpr double kPi = std::numbers::pi;

void check_jakes(const Jakes& j)
{
    if (!(j.doppler > 0.0 && j.doppler <= 0.5)) throw DomainError("Jakes process: Doppler must lie in (0, 1/2]");
}

void check_gm(const GaussMarkov& g)
{
    if (!(std::abs(g.r) < 1.0)) throw DomainError("Gauss-Markov process: |r| must be below 1");
}

void check_delta(double delta)
{
    if (!(delta >= 0.0) || std::isnan(delta)) throw DomainError("prediction error: delta must be non-negative");
}

// Integral of log S over the Jakes support, in closed form.
double jakes_log_mass(double f) { return 2.0 * f * (1.0 - std::log(2.0 * kPi * f)); }

// int log1p(S / delta) over the Jakes support. With xi = F sin(theta) the
// singular part integrates exactly, leaving a smooth remainder for Gauss-Legendre.
double jakes_log_ratio(double f, double delta)
{
    const double c = delta * kPi * f;
    const auto remainder = quad::integrate_refined(
        [&](double th) { const double ct = std::cos(th); return ct * std::log1p(c * ct); }, 0.0, kPi / 2.0, 1e-13);
    return 2.0 * f * remainder.value - 2.0 * f * std::log(c) - 2.0 * f * (std::numbers::ln2 - 1.0);
}

double tabulated_log_ratio(const Tabulated& t, double delta)
{
    std::vector<double> y(t.xi.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::log1p(t.density[i] / delta);
    return quad::trapezoid(t.xi, y);
}

bool tabulated_full_band(const Tabulated& t)
{
    return t.xi.front() <= -0.5 + 1e-12 && t.xi.back() >= 0.5 - 1e-12
           && std::all_of(t.density.begin(), t.density.end(), [](double s) { return s > 0.0; });
}

// Largest |xi| of a grid point bordering a segment with positive density.
double tabulated_support(const Tabulated& t)
{
    const std::size_t n = t.xi.size();
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool touches = t.density[i] > 0.0 || (i > 0 && t.density[i - 1] > 0.0) ||
                             (i + 1 < n && t.density[i + 1] > 0.0);
        if (touches) f = std::max(f, std::abs(t.xi[i]));
    }
    return std::min(f, 0.5);
}

} // namespace

Tabulated make_tabulated(std::vector<double> xi, std::vector<double> density)
{
    if (xi.size() != density.size() || xi.size() < 2) throw DomainError("tabulated spectrum: need >= 2 matching points");
    for (std::size_t i = 0; i < xi.size(); ++i) {
        if (!(xi[i] >= -0.5 && xi[i] <= 0.5)) throw DomainError("tabulated spectrum: xi outside [-1/2, 1/2]");
        if (i > 0 && !(xi[i] > xi[i - 1])) throw DomainError("tabulated spectrum: grid must be strictly ascending");
        if (!(density[i] >= 0.0) || !std::isfinite(density[i]))
            throw DomainError("tabulated spectrum: density must be finite and non-negative");
    }
    const double mass = quad::trapezoid(xi, density);
    if (!(std::abs(mass - 1.0) <= 1e-3)) throw DomainError("tabulated spectrum: mass differs from one by more than 1e-3");
    for (double& s : density) s /= mass;
    return {std::move(xi), std::move(density)};
}

Tabulated load_spectrum_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open spectrum table: " + path);
    std::vector<double> xi, s;
    std::string line;
    while (std::getline(in, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        double a, b;
        if (!(ls >> a)) continue;
        if (!(ls >> b)) throw IoError("spectrum table: malformed line in " + path);
        xi.push_back(a);
        s.push_back(b);
    }
    return make_tabulated(std::move(xi), std::move(s));
}

std::string process_name(const FadingProcess& p)
{
    return std::visit(overloaded{
        [](const BlockIid&) { return std::string("iid"); },
        [](const Jakes&) { return std::string("jakes"); },
        [](const GaussMarkov&) { return std::string("gauss-markov"); },
        [](const Tabulated&) { return std::string("tabulated"); },
    }, p);
}

double process_param(const FadingProcess& p)
{
    return std::visit(overloaded{
        [](const BlockIid&) { return 0.0; },
        [](const Jakes& j) { return j.doppler; },
        [](const GaussMarkov& g) { return g.r; },
        [](const Tabulated& t) { return t.xi.back() - t.xi.front(); },
    }, p);
}

double spectral_density(const FadingProcess& p, double xi)
{
    return std::visit(overloaded{
        [](const BlockIid&) { return 1.0; },
        [&](const Jakes& j) {
            check_jakes(j);
            const double f = j.doppler;
            return std::abs(xi) < f ? 1.0 / (kPi * std::sqrt(f * f - xi * xi)) : 0.0;
        },
        [&](const GaussMarkov& g) {
            check_gm(g);
            return (1.0 - g.r * g.r) / (1.0 + g.r * g.r - 2.0 * g.r * std::cos(2.0 * kPi * xi));
        },
        [&](const Tabulated& t) {
            if (xi < t.xi.front() || xi > t.xi.back()) return 0.0;
            const auto it = std::upper_bound(t.xi.begin(), t.xi.end(), xi);
            if (it == t.xi.end()) return t.density.back();
            const std::size_t i = static_cast<std::size_t>(it - t.xi.begin());
            const double w = (xi - t.xi[i - 1]) / (t.xi[i] - t.xi[i - 1]);
            return (1.0 - w) * t.density[i - 1] + w * t.density[i];
        },
    }, p);
}

double gauss_markov_prediction_error(double r, double delta)
{
    check_gm({r});
    check_delta(delta);
    const double r2 = r * r;
    const double x = 1.0 + delta * delta + 2.0 * delta * (1.0 + r2) / (1.0 - r2);
    // (1 - r^2)[1 + (sqrt(x) - 1 - delta) / 2], rationalized to avoid cancellation.
    return (1.0 - r2) + 2.0 * delta * r2 / (std::sqrt(x) + 1.0 + delta);
}

double spectral_prediction_error(const std::function<double(double)>& density, double delta, double tol)
{
    check_delta(delta);
    if (delta == 0.0) {
        const auto r = quad::integrate_adaptive([&](double x) { return std::log(density(x)); }, -0.5, 0.5, tol);
        return std::exp(r.value);
    }
    const auto r = quad::integrate_adaptive([&](double x) { return std::log1p(density(x) / delta); }, -0.5, 0.5, tol);
    return delta * std::expm1(r.value);
}

double prediction_error(const FadingProcess& p, double delta)
{
    check_delta(delta);
    return std::visit(overloaded{
        [](const BlockIid&) { return 1.0; },
        [&](const Jakes& j) {
            check_jakes(j);
            if (delta == 0.0) return j.doppler >= 0.5 ? std::exp(jakes_log_mass(j.doppler)) : 0.0;
            return delta * std::expm1(jakes_log_ratio(j.doppler, delta));
        },
        [&](const GaussMarkov& g) { return gauss_markov_prediction_error(g.r, delta); },
        [&](const Tabulated& t) {
            if (delta == 0.0) {
                if (!tabulated_full_band(t)) return 0.0;
                std::vector<double> y(t.xi.size());
                for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::log(t.density[i]);
                return std::exp(quad::trapezoid(t.xi, y));
            }
            // Outside the tabulated support S = 0, which contributes nothing.
            return delta * std::expm1(tabulated_log_ratio(t, delta));
        },
    }, p);
}

double filtering_error(double delta, double eps1)
{
    check_delta(delta);
    if (delta == 0.0 || eps1 == 0.0) return 0.0;
    return delta * eps1 / (delta + eps1);
}

double delayed_estimate_error(const FadingProcess& p, double delta, int delay)
{
    if (delay == 0) return filtering_error(delta, prediction_error(p, delta));
    if (delay == 1) return prediction_error(p, delta);
    throw DomainError("delayed estimate error: only delays of 0 or 1 frame are supported");
}

PredictionBounds prediction_error_bounds(const FadingProcess& p, double delta)
{
    check_delta(delta);
    double f = 0.0;
    double log_mass = 0.0;
    if (const auto* j = std::get_if<Jakes>(&p)) {
        check_jakes(*j);
        f = j->doppler;
        log_mass = jakes_log_mass(f);
    } else if (const auto* t = std::get_if<Tabulated>(&p)) {
        f = 0.5 * (t->xi.back() - t->xi.front());
        std::vector<double> y(t->xi.size());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::log(t->density[i]);
        log_mass = quad::trapezoid(t->xi, y);
    } else {
        throw DomainError("prediction bounds need a band-limited (Jakes or tabulated) process");
    }
    const double d2f = std::pow(delta, 2.0 * f);
    const double lead = std::pow(delta, 1.0 - 2.0 * f);
    return {lead * (std::exp(log_mass) - d2f), lead * (std::pow(1.0 / (2.0 * f) + delta, 2.0 * f) - d2f)};
}

double doppler_bandwidth(const FadingProcess& p)
{
    return std::visit(overloaded{
        [](const BlockIid&) { return 0.5; },
        [](const Jakes& j) { return std::min(j.doppler, 0.5); },
        [](const GaussMarkov&) { return 0.5; },
        [](const Tabulated& t) { return tabulated_full_band(t) ? 0.5 : tabulated_support(t); },
    }, p);
}

bool is_regular(const FadingProcess& p) { return prediction_error(p, 0.0) > 0.0; }

double multiplexing_gain(const FadingProcess& p, int m)
{
    if (m < 1) throw DomainError("multiplexing_gain: M must be >= 1");
    if (is_regular(p)) return 0.0;
    return m * (1.0 - 2.0 * doppler_bandwidth(p));
}

double doppler_from_mobility(double speed_mps, double carrier_hz, double frame_s)
{
    if (!(speed_mps >= 0.0) || !(carrier_hz > 0.0) || !(frame_s > 0.0))
        throw DomainError("doppler_from_mobility: speed must be non-negative, carrier and frame positive");
    return speed_mps * carrier_hz * frame_s / kSpeedOfLight;
}

double kmh_to_mps(double kmh) { return kmh / 3.6; }

double regular_ceiling(int m, double eps1_zero)
{
    if (m < 2) throw DomainError("regular_ceiling: need M >= 2");
    if (!(eps1_zero > 0.0 && eps1_zero <= 1.0)) throw DomainError("regular_ceiling: eps1(0) must lie in (0, 1]");
    const double nats = std::log(1.0 / eps1_zero + m - 1.0) - specfun::digamma(m) + 1.0 / (2.0 * m - 1.0)
                        + 1.0 / (2.0 * m - 2.0);
    return nats / std::numbers::ln2;
}

} // namespace mumimo::timecorr
