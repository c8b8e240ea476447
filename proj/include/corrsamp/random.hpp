#pragma once

// Deterministic counter-based randomness. Trial t of a run with master seed s
// draws all of its bits from derive_seed(s, t), so results depend only on
// (seed, trial index), never on thread scheduling or evaluation order.

#include <cstdint>

namespace corrsamp {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Fmix of splitmix64. Bijective on 64-bit values.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master + kGolden * (index + 1));
}

// splitmix64 stream.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform in [0,1), 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0,n), exact via rejection.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = n * (~0ull / n);  // largest multiple of n that fits
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return x % n;
    }

private:
    std::uint64_t state_;
};

}  // namespace corrsamp
