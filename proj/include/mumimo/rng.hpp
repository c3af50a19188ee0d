#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace mumimo {

// Independent random streams within one trial.
enum class Stream : std::uint64_t {
    Channel = 1,
    TrainingNoise,
    FeedbackNoise,
    Codebook,
    ErrorEvent,
    Uplink,
    Wishart,
    Auxiliary,
};

// Counter-based generator: the state is a pure function of (seed, trial, stream, attempt),
// so any trial can be regenerated independently of how work is split across threads.
// The engine is xoshiro256**, keyed through SplitMix64.
class Rng {
public:
    using result_type = std::uint64_t;

    Rng(std::uint64_t seed, std::uint64_t trial, Stream stream, std::uint64_t attempt = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()();

    // Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    // Circularly symmetric complex Gaussian with unit variance.
    std::complex<double> complex_normal();

private:
    std::uint64_t s_[4];
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

} // namespace mumimo
