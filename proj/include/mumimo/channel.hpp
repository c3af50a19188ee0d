#pragma once

#include "mumimo/linalg.hpp"
#include "mumimo/rng.hpp"

#include <span>
#include <vector>

namespace mumimo {

// M x K matrix whose column k is the channel h_k from the M base-station antennas to user k.
CMatrix sample_channel(int m, int k, Rng& rng);

std::vector<cplx> random_unit_vector(int m, Rng& rng);

// Unit vector uniformly distributed on the sphere orthogonal to `u` (u must be unit norm).
std::vector<cplx> random_orthogonal_unit_vector(std::span<const cplx> u, Rng& rng);

struct TrainingOutcome {
    std::vector<cplx> estimate;
    double error_variance = 0.0;
    // Received pilot observation; equals the true channel when the training is noiseless.
    std::vector<cplx> raw_observation;
    bool noiseless = false;
};

// Common pilots: s = sqrt(beta1 P) h + z with N0 = 1, followed by the MMSE estimate.
TrainingOutcome common_training(std::span<const cplx> h, double beta1, double snr, Rng& rng);

// Dedicated pilots sent through beamformer k: r = sqrt(beta2 P) a_kk + z.
TrainingOutcome dedicated_training(cplx a_kk, double beta2, double snr, Rng& rng);

// Zero-forcing beamformers: column k is a unit vector orthogonal to every other column
// of `h_hat`, phase-normalized so its first non-negligible entry is real positive.
CMatrix zf_beamformers(const CMatrix& h_hat);

// a(k, j) = h_k^H v_j
CMatrix coupling_coefficients(const CMatrix& h, const CMatrix& v);

} // namespace mumimo
