// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace eclipsim {

/// 256-bit node identifier, compared as a big-endian unsigned integer.
/// words[0] holds the most significant 64 bits.
struct NodeId {
    std::array<uint64_t, 4> words{};

    friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;

    constexpr NodeId operator^(const NodeId& o) const {
        NodeId r;
        for (int i = 0; i < 4; ++i) r.words[i] = words[i] ^ o.words[i];
        return r;
    }

    /// Bit access from the most significant end: bit(0) is the top bit.
    constexpr int bit(int i) const {
        return static_cast<int>((words[static_cast<size_t>(i) >> 6] >> (63 - (i & 63))) & 1u);
    }

    constexpr bool is_zero() const {
        return (words[0] | words[1] | words[2] | words[3]) == 0;
    }

    std::string to_hex() const;  // 64 lowercase hex characters

    /// Parses exactly 64 hex characters. Throws std::invalid_argument otherwise.
    static NodeId from_hex(std::string_view hex);
};

struct NodeIdHash {
    size_t operator()(const NodeId& id) const noexcept {
        // Words are uniform already; fold them.
        uint64_t h = id.words[0];
        h = h * 0x9e3779b97f4a7c15ULL ^ id.words[1];
        h = h * 0x9e3779b97f4a7c15ULL ^ id.words[2];
        h = h * 0x9e3779b97f4a7c15ULL ^ id.words[3];
        return static_cast<size_t>(h);
    }
};

/// Log-distance between two ids: floor(log2(a xor b)), i.e. 255 minus the
/// length of their common prefix. Equal ids have no defined log-distance and
/// yield nullopt; callers must handle that case explicitly rather than
/// conflating it with distance 0.
std::optional<int> log_distance(const NodeId& a, const NodeId& b);

/// True iff (a xor target) < (b xor target) as 256-bit unsigned integers.
/// Induces a strict total order over distinct ids for any fixed target.
bool xor_less(const NodeId& a, const NodeId& b, const NodeId& target);

struct IPv4 {
    uint32_t addr = 0;  // host byte order, e.g. 10.0.0.1 == 0x0a000001

    friend constexpr auto operator<=>(const IPv4&, const IPv4&) = default;

    std::string to_string() const;
    static IPv4 from_string(std::string_view s);  // throws std::invalid_argument

    static constexpr IPv4 from_octets(uint8_t a, uint8_t b, uint8_t c, uint8_t d) {
        return IPv4{(uint32_t(a) << 24) | (uint32_t(b) << 16) | (uint32_t(c) << 8) | d};
    }
};

/// First 24 bits of an IPv4 address; two addresses share a SubnetKey iff
/// their first three octets match.
struct SubnetKey {
    uint32_t prefix = 0;  // upper 24 bits, lower byte zeroed

    friend constexpr auto operator<=>(const SubnetKey&, const SubnetKey&) = default;
};

constexpr SubnetKey subnet_of(IPv4 ip) { return SubnetKey{ip.addr & 0xffffff00u}; }

/// Contact information as carried in neighbors responses and stored in
/// buckets, replacement lists and connection slots.
struct NodeRecord {
    NodeId id;
    IPv4 ip;
    uint16_t udp_port = 0;
    uint16_t tcp_port = 0;

    friend constexpr auto operator<=>(const NodeRecord&, const NodeRecord&) = default;
};

}  // namespace eclipsim
