#pragma once

#include <cstdint>

namespace freshcon {

// Counter-style splitmix64 generator. Used instead of <random> engines so
// that streams are reproducible across platforms and can be split by index
// for order-independent parallel sampling.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in {0, ..., n-1}. Modulo bias is ~n/2^64, irrelevant here.
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// Derives an independent stream seed from (seed, stream index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL + stream * 0xda942042e4dd58b5ULL));
    g.next();
    return g.next();
}

} // namespace freshcon
