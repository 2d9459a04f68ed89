#pragma once

// Deterministic random number generation. All randomness in metricfuse flows
// through SplitMix64 streams derived from explicit seeds, so results are
// reproducible across runs, platforms, and thread counts. The standard
// <random> distributions are avoided on purpose: their output is
// implementation-defined, which would break byte-identical artifacts.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace metricfuse::rng {

// Finalizer from the splitmix64 generator; bijective on 64-bit values.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Derives an independent stream seed for (seed, index) pairs. Used to give
// every bootstrap replicate its own generator regardless of execution order.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index * kGolden + kGolden));
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Unbiased draw from [0, n) via rejection sampling.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; consumes exactly two uniforms per call.
    double next_gaussian() {
        const double u1 = 1.0 - next_double();  // (0, 1]
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

// Fisher-Yates shuffle driven by SplitMix64 (std::shuffle is not portable
// across standard library implementations).
template <typename T>
void shuffle(std::vector<T>& values, SplitMix64& gen) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[gen.next_below(i)]);
    }
}

}  // namespace metricfuse::rng
