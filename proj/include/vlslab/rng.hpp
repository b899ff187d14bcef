#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace vlslab {

// All randomness in the library flows through xoshiro256++ seeded via
// splitmix64 from a single 64-bit seed. Both generators are fully specified
// here, so experiment output is bit-identical across platforms; nothing ever
// reads wall-clock entropy.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Folds one value into a seed (hash-combine over splitmix64). Used to derive
// per-trial seeds from (top seed, family, n, b, trial index) so every cell of
// a sweep is independently reproducible.
inline std::uint64_t seed_mix(std::uint64_t h, std::uint64_t v) {
    std::uint64_t s = h ^ (v + 0x9E3779B97F4A7C15ull + (h << 12) + (h >> 4));
    return splitmix64(s);
}

inline std::uint64_t seed_mix(std::uint64_t h, double v) {
    return seed_mix(h, std::bit_cast<std::uint64_t>(v));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace vlslab
