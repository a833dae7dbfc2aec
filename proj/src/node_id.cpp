// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include "eclipsim/node_id.hpp"

#include <bit>
#include <charconv>
#include <stdexcept>

namespace eclipsim {

std::string NodeId::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(64, '0');
    for (int w = 0; w < 4; ++w) {
        uint64_t v = words[static_cast<size_t>(w)];
        for (int n = 15; n >= 0; --n) {
            out[static_cast<size_t>(w * 16 + n)] = digits[v & 0xf];
            v >>= 4;
        }
    }
    return out;
}

NodeId NodeId::from_hex(std::string_view hex) {
    if (hex.size() != 64)
        throw std::invalid_argument("node id must be 64 hex characters, got " +
                                    std::to_string(hex.size()));
    NodeId id;
    for (int w = 0; w < 4; ++w) {
        uint64_t v = 0;
        for (int n = 0; n < 16; ++n) {
            char c = hex[static_cast<size_t>(w * 16 + n)];
            uint64_t nibble;
            if (c >= '0' && c <= '9') nibble = static_cast<uint64_t>(c - '0');
            else if (c >= 'a' && c <= 'f') nibble = static_cast<uint64_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') nibble = static_cast<uint64_t>(c - 'A' + 10);
            else throw std::invalid_argument("invalid hex character in node id");
            v = (v << 4) | nibble;
        }
        id.words[static_cast<size_t>(w)] = v;
    }
    return id;
}

std::optional<int> log_distance(const NodeId& a, const NodeId& b) {
    for (int w = 0; w < 4; ++w) {
        uint64_t x = a.words[static_cast<size_t>(w)] ^ b.words[static_cast<size_t>(w)];
        if (x != 0) return 255 - (w * 64 + std::countl_zero(x));
    }
    return std::nullopt;  // equal ids
}

bool xor_less(const NodeId& a, const NodeId& b, const NodeId& target) {
    for (int w = 0; w < 4; ++w) {
        uint64_t ax = a.words[static_cast<size_t>(w)] ^ target.words[static_cast<size_t>(w)];
        uint64_t bx = b.words[static_cast<size_t>(w)] ^ target.words[static_cast<size_t>(w)];
        if (ax != bx) return ax < bx;
    }
    return false;
}

std::string IPv4::to_string() const {
    return std::to_string(addr >> 24) + '.' + std::to_string((addr >> 16) & 0xff) + '.' +
           std::to_string((addr >> 8) & 0xff) + '.' + std::to_string(addr & 0xff);
}

IPv4 IPv4::from_string(std::string_view s) {
    uint32_t parts[4];
    size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        if (pos >= s.size()) throw std::invalid_argument("bad IPv4 address");
        uint32_t v = 0;
        auto [p, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
        if (ec != std::errc() || v > 255) throw std::invalid_argument("bad IPv4 address");
        parts[i] = v;
        pos = static_cast<size_t>(p - s.data());
        if (i < 3) {
            if (pos >= s.size() || s[pos] != '.') throw std::invalid_argument("bad IPv4 address");
            ++pos;
        }
    }
    if (pos != s.size()) throw std::invalid_argument("bad IPv4 address");
    return IPv4{(parts[0] << 24) | (parts[1] << 16) | (parts[2] << 8) | parts[3]};
}

}  // namespace eclipsim
