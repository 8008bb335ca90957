#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace ranknas {

// 64-bit FNV-1a. Used for cache keys, config hashes and rng stream tags.
constexpr uint64_t fnv1a(std::string_view s, uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

constexpr uint64_t fnv1a_u64(uint64_t v, uint64_t h = 0xcbf29ce484222325ull) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derives an independent seed for a named sub-stream. All experiment
/// randomness flows from a config seed through tagged derivations, never
/// from the clock or the OS.
inline uint64_t derive_seed(uint64_t seed, std::string_view tag, uint64_t index = 0) {
    uint64_t x = seed ^ fnv1a_u64(index, fnv1a(tag));
    return splitmix64(x);
}

/// xoshiro256** with splitmix64 seeding. Hand-rolled so that streams are
/// bit-identical across standard libraries and platforms; std:: distributions
/// are implementation-defined and would break the determinism contracts.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
    }
    Rng(uint64_t seed, std::string_view stream) : Rng(derive_seed(seed, stream)) {}

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform integer in [0, bound). bound must be > 0.
    uint64_t next_below(uint64_t bound) {
        // Lemire multiply-shift with rejection; unbiased and deterministic.
        uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        uint64_t lo = static_cast<uint64_t>(m);
        if (lo < bound) {
            uint64_t t = (0 - bound) % bound;
            while (lo < t) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * bound;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1).
    double next_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller. Draws a fresh pair every call.
    double next_gaussian() {
        double u1 = next_real();
        double u2 = next_real();
        while (u1 <= 0.0) u1 = next_real();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    uint64_t s_[4];
};

} // namespace ranknas
