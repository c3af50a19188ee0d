#include "mumimo/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace mumimo {

namespace {

std::uint64_t splitmix64(std::uint64_t& x)
{
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v)
{
    std::uint64_t x = h ^ v;
    return splitmix64(x);
}

} // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t trial, Stream stream, std::uint64_t attempt)
{
    std::uint64_t key = mix(0x6a09e667f3bcc908ULL, seed);
    key = mix(key, trial);
    key = mix(key, static_cast<std::uint64_t>(stream));
    key = mix(key, attempt);
    for (auto& w : s_) w = splitmix64(key);
}

Rng::result_type Rng::operator()()
{
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

double Rng::normal() { return gauss_(*this); }

std::complex<double> Rng::complex_normal()
{
    const double a = gauss_(*this);
    const double b = gauss_(*this);
    return {a * (std::numbers::sqrt2 / 2.0), b * (std::numbers::sqrt2 / 2.0)};
}

} // namespace mumimo
