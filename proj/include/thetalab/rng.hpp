#pragma once

#include <cmath>
#include <cstdint>

namespace thetalab {

// SplitMix64 finalizer. Used both as a stand-alone mixer for deriving stream
// seeds and as the state initializer for Xoshiro256.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256** by Blackman & Vigna. Fully portable: output depends only on
// the 64-bit seed, never on platform or standard-library internals, so runs
// reproduce bit-for-bit everywhere.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound) via Lemire's multiply-shift with
    // rejection; unbiased and deterministic.
    std::uint64_t next_below(std::uint64_t bound) {
        __uint128_t m = static_cast<__uint128_t>(next_u64()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0ULL - bound) % bound;
            while (lo < threshold) {
                m = static_cast<__uint128_t>(next_u64()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Bernoulli(p) from a single draw.
    bool next_bernoulli(double p) {
        return next_unit() < p;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

// Derives the seed of an independent substream. Streams are indexed by a
// 64-bit tag (trial index, cell index, ...); the derivation is documented as
// part of the reproducibility contract: seed(master, tag) =
// splitmix64(splitmix64(master) ^ splitmix64(tag + GOLDEN)).
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t tag) {
    std::uint64_t a = master;
    std::uint64_t b = tag + 0x632BE59BD9B4E019ULL;
    const std::uint64_t ha = splitmix64_next(a);
    const std::uint64_t hb = splitmix64_next(b);
    std::uint64_t c = ha ^ hb;
    return splitmix64_next(c);
}

} // namespace thetalab
