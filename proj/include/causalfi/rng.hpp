#pragma once

#include <cstdint>

namespace causalfi {

// Bijective 64-bit finalizer from splitmix64.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based stream derivation: stream i of a master seed is
// mix64(master + (i + 1) * golden gamma). Every seeded operation pulls its
// randomness from a stream derived this way, so replications can run in any
// order (or in parallel) and still produce identical results. Derivation
// nests: a derived seed can serve as the master of further streams.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(master + 0x9E3779B97F4A7C15ull * (stream + 1));
}

// splitmix64 generator. Fully specified here so output is identical on every
// platform; <random> distributions are avoided since their mapping from bits
// to values is implementation-defined.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound) via 128-bit multiply-shift.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    std::uint64_t state_;
};

}  // namespace causalfi
