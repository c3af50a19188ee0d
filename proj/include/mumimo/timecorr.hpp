#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace mumimo::timecorr {

// Frame-to-frame fading processes, described by their normalized spectral
// density S(xi) on xi in [-1/2, 1/2] (unit power).
struct BlockIid {};
struct Jakes {
    double doppler = 0.0; // F = v fc Tf / c, in (0, 1/2]
};
struct GaussMarkov {
    double r = 0.0; // one-frame correlation, |r| < 1
};
struct Tabulated {
    std::vector<double> xi;
    std::vector<double> density;
};

using FadingProcess = std::variant<BlockIid, Jakes, GaussMarkov, Tabulated>;

// Validates a tabulated spectrum (ascending grid inside [-1/2, 1/2], non-negative,
// trapezoid mass within 1e-3 of one) and rescales it to unit mass.
Tabulated make_tabulated(std::vector<double> xi, std::vector<double> density);
// Two whitespace-separated columns (xi, S); '#' starts a comment.
Tabulated load_spectrum_table(const std::string& path);

std::string process_name(const FadingProcess& p);
double process_param(const FadingProcess& p);

double spectral_density(const FadingProcess& p, double xi);

// One-step prediction error for noisy past observations with noise-to-signal ratio delta.
double prediction_error(const FadingProcess& p, double delta);
// Error when the current observation is also available.
double filtering_error(double delta, double eps1);
// Error of the user's estimate with feedback delay d in {0, 1}.
double delayed_estimate_error(const FadingProcess& p, double delta, int delay);

double gauss_markov_prediction_error(double r, double delta);

// Prediction error for an arbitrary spectrum on [-1/2, 1/2] by adaptive quadrature.
double spectral_prediction_error(const std::function<double(double)>& density, double delta, double tol = 1e-12);

struct PredictionBounds {
    double lower = 0.0;
    double upper = 0.0;
};
// Bounds for a process band-limited to [-F, F] (Jakes or tabulated).
PredictionBounds prediction_error_bounds(const FadingProcess& p, double delta);

// Half-width of the spectral support; 1/2 for processes with full-band spectra.
double doppler_bandwidth(const FadingProcess& p);
bool is_regular(const FadingProcess& p);

// Degrees of freedom per frame of the sum rate under the one-frame delayed estimate.
double multiplexing_gain(const FadingProcess& p, int m);

inline constexpr double kSpeedOfLight = 299792458.0;
double doppler_from_mobility(double speed_mps, double carrier_hz, double frame_s);
double kmh_to_mps(double kmh);

// Upper bound on the per-user genie rate (bits) for a regular process
// observed through a noiseless past, eps1_zero = prediction error at delta = 0.
double regular_ceiling(int m, double eps1_zero);

} // namespace mumimo::timecorr
