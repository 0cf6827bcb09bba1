#pragma once

#include <cstdint>

namespace ep {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with streams derived from (seed, trajectory index), so any
// worker can run any trajectory and the draw sequence never depends on
// scheduling.
struct Rng {
    std::uint64_t s[4];

    static Rng stream(std::uint64_t seed, std::uint64_t trajectory) {
        Rng r;
        std::uint64_t x = seed ^ (trajectory * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL);
        bool all_zero = true;
        for (auto& w : r.s) {
            w = splitmix64(x);
            all_zero = all_zero && w == 0;
        }
        if (all_zero) r.s[0] = 0x9E3779B97F4A7C15ULL;
        return r;
    }

    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t next() {
        std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // uniform in [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace ep
