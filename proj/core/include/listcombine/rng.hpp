#pragma once

#include <cstdint>

namespace listcombine {

/// Deterministic counter-based random stream (splitmix64). The state is a
/// counter advanced by a fixed increment and every output is a bijective mix
/// of it, so independent streams are cheap to derive and reproducible across
/// platforms; no standard-library distribution objects are involved.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_unit() < p; }

    /// Binomial by summed Bernoulli trials; intended for small trial counts.
    int binomial(int trials, double rate) {
        int k = 0;
        for (int i = 0; i < trials; ++i) k += bernoulli(rate) ? 1 : 0;
        return k;
    }

    /// Uniform integer in [0, bound), bound > 0.
    std::uint64_t uniform_index(std::uint64_t bound) {
        // Rejection sampling over the largest multiple of bound.
        const std::uint64_t limit = ~0ULL - (~0ULL % bound + 1) % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x > limit);
        return x % bound;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Derives the stream for a (stream, cell, replicate) coordinate from a
/// master seed. Pure function of the indices: serial and parallel runs over
/// the same coordinates draw identical numbers.
inline RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t a,
                                  std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = RandomStream::mix(master_seed ^ 0xA0761D6478BD642FULL);
    h = RandomStream::mix(h ^ RandomStream::mix(a ^ 0xE7037ED1A0B428DBULL));
    h = RandomStream::mix(h ^ RandomStream::mix(b ^ 0x8EBC6AF09C88C6E3ULL));
    h = RandomStream::mix(h ^ RandomStream::mix(c ^ 0x589965CC75374CC3ULL));
    return RandomStream(h);
}

} // namespace listcombine
