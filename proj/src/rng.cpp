// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include "eclipsim/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace eclipsim {

namespace {

inline void quarter_round(uint32_t& a, uint32_t& b, uint32_t& c, uint32_t& d) {
    a += b; d ^= a; d = std::rotl(d, 16);
    c += d; b ^= c; b = std::rotl(b, 12);
    a += b; d ^= a; d = std::rotl(d, 8);
    c += d; b ^= c; b = std::rotl(b, 7);
}

void chacha12_block(const std::array<uint32_t, 16>& in, std::array<uint32_t, 16>& out) {
    out = in;
    for (int round = 0; round < 6; ++round) {  // 6 double rounds = 12 rounds
        quarter_round(out[0], out[4], out[8], out[12]);
        quarter_round(out[1], out[5], out[9], out[13]);
        quarter_round(out[2], out[6], out[10], out[14]);
        quarter_round(out[3], out[7], out[11], out[15]);
        quarter_round(out[0], out[5], out[10], out[15]);
        quarter_round(out[1], out[6], out[11], out[12]);
        quarter_round(out[2], out[7], out[8], out[13]);
        quarter_round(out[3], out[4], out[9], out[14]);
    }
    for (int i = 0; i < 16; ++i) out[static_cast<size_t>(i)] += in[static_cast<size_t>(i)];
}

}  // namespace

Rng::Rng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream), pos_(8) {
    // "expand 32-byte k"
    input_[0] = 0x61707865;
    input_[1] = 0x3320646e;
    input_[2] = 0x79622d32;
    input_[3] = 0x6b206574;
    uint64_t s = seed;
    for (int i = 0; i < 4; ++i) {
        s = splitmix64(s);
        input_[static_cast<size_t>(4 + 2 * i)] = static_cast<uint32_t>(s);
        input_[static_cast<size_t>(5 + 2 * i)] = static_cast<uint32_t>(s >> 32);
    }
    input_[12] = 0;  // 64-bit block counter
    input_[13] = 0;
    input_[14] = static_cast<uint32_t>(stream);
    input_[15] = static_cast<uint32_t>(stream >> 32);
}

void Rng::refill() {
    std::array<uint32_t, 16> out;
    chacha12_block(input_, out);
    for (int i = 0; i < 8; ++i)
        buf_[static_cast<size_t>(i)] =
            static_cast<uint64_t>(out[static_cast<size_t>(2 * i)]) |
            (static_cast<uint64_t>(out[static_cast<size_t>(2 * i + 1)]) << 32);
    if (++input_[12] == 0) ++input_[13];
    pos_ = 0;
}

uint64_t Rng::next_u64() {
    if (pos_ >= 8) refill();
    return buf_[pos_++];
}

double Rng::exponential(double mean) {
    // next_double() < 1, so the argument of log stays strictly positive.
    return -mean * std::log(1.0 - next_double());
}

double Rng::normal(double mean, double stddev) {
    double u1 = 1.0 - next_double();  // (0, 1]
    double u2 = next_double();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
}

Rng Rng::child(uint64_t tag) const {
    uint64_t s = splitmix64(seed_ ^ splitmix64(tag ^ 0xa5a5a5a5a5a5a5a5ULL));
    uint64_t t = splitmix64(stream_ ^ splitmix64(tag));
    return Rng(s, t);
}

}  // namespace eclipsim
