#pragma once

#include "mumimo/linalg.hpp"
#include "mumimo/params.hpp"
#include "mumimo/rng.hpp"
#include "mumimo/timecorr.hpp"

#include <cstdint>
#include <functional>

namespace mumimo::mc {

struct SimConfig {
    SystemParams params;
    FeedbackScheme scheme{scheme::AnalogAwgn{}, std::nullopt};
    timecorr::FadingProcess process = timecorr::BlockIid{};
    std::int64_t trials = 10000;
    std::uint64_t seed = 1;
    int workers = 0; // 0: one per hardware thread
};

struct EstimateWithCI {
    double mean = 0.0;
    double ci95_halfwidth = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
    std::int64_t resampled = 0; // trials redrawn after a rank-deficient estimate
};

// Trials are grouped in fixed blocks, each seeded from (seed, trial index), and
// merged in block order, so results do not depend on the number of workers.
inline constexpr std::int64_t kBlockSize = 1024;

// Per-user rate with the receiver given its exact coupling coefficients,
// averaged over users and trials.
EstimateWithCI simulate_genie_rate(const SimConfig& config);

// E |h_k^H v_j|^2 for the given pair (k != j for a cross term).
EstimateWithCI estimate_cross_coupling(const SimConfig& config, int k, int j);

// Coupling matrix a(k, j) = h_k^H v_j of a single trial.
CMatrix simulate_trial_couplings(const SimConfig& config, std::int64_t trial, std::int64_t* resamples = nullptr);

// Runs `per_trial` over trials [0, n) on the block schedule above.
EstimateWithCI run_trials(std::int64_t n, int workers, const std::function<double(std::int64_t)>& per_trial);

struct ConcavityCheck {
    EstimateWithCI lhs;        // E log(1 + X A)
    EstimateWithCI rhs;        // E log(1 + (lambda + (1 - lambda) X) A)
    EstimateWithCI difference; // rhs - lhs on common draws
};

// Monte Carlo check that mixing a unit-mean variable toward its mean cannot decrease E log(1 + X A).
ConcavityCheck lemma2_property_check(const std::function<double(Rng&)>& sampler, double a, double lambda,
                                     std::int64_t trials, std::uint64_t seed);

} // namespace mumimo::mc
