// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#pragma once

#include <array>
#include <cstdint>

namespace eclipsim {

/// Deterministic random source backed by the ChaCha12 stream cipher.
///
/// Node ids stand in for hashed ECDSA public keys, so the generator has to be
/// of cryptographic quality: every statistical result downstream (mining
/// costs, order statistics, minimum-id races) assumes uniform independent
/// bits. The (seed, stream) pair fully determines the output sequence;
/// distinct streams derived from one seed are independent.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0);

    uint64_t next_u64();

    /// Uniform double in [0, 1) with 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be >= 1. Uses the multiply-shift
    /// reduction; the bias of ~n/2^64 is far below anything observable here.
    uint64_t bounded(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    double exponential(double mean);
    double normal(double mean, double stddev);

    /// Independent generator derived from this one's identity and a caller
    /// tag. Deterministic and order-free: children with the same tag are
    /// identical no matter when they are derived.
    Rng child(uint64_t tag) const;

    uint64_t seed() const { return seed_; }
    uint64_t stream() const { return stream_; }

private:
    void refill();

    uint64_t seed_;
    uint64_t stream_;
    std::array<uint32_t, 16> input_;  // ChaCha block input
    std::array<uint64_t, 8> buf_;
    unsigned pos_;
};

/// SplitMix64 finalizer; used for seed expansion and tag mixing.
constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace eclipsim
