#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include "mzlab/core.hpp"

namespace mzlab {

// Counter-based generator: draw k of stream `seed` is splitmix64_mix(seed + k * kGolden).
// The mixing constants are the published SplitMix64 finalizer constants, so streams
// are reproducible on any platform with IEEE doubles.
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for trial `index` of a run with master seed `master`; independent of scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    return splitmix64_mix(master ^ splitmix64_mix(index + kGolden));
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return splitmix64_mix(seed_ + (++counter_) * kGolden); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal by Box-Muller; one value per call, no cached spare.
    double normal()
    {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    /// Standard complex normal: E|z|^2 = 1.
    Complex complex_normal()
    {
        const double re = normal();
        const double im = normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

    [[nodiscard]] std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace mzlab
