// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include "eclipsim/sybil_pool.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "eclipsim/mining.hpp"

namespace eclipsim {

SybilPool SybilPool::build(size_t n, Rng& rng) {
    std::vector<NodeId> ids;
    ids.reserve(n);
    for (size_t i = 0; i < n; ++i) ids.push_back(generate_id(rng));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    // 256-bit collisions are a non-event, but stay correct if one happens.
    while (ids.size() < n) {
        NodeId extra = generate_id(rng);
        auto it = std::lower_bound(ids.begin(), ids.end(), extra);
        if (it == ids.end() || *it != extra) ids.insert(it, extra);
    }
    SybilPool pool;
    pool.ids_ = std::move(ids);
    return pool;
}

SybilPool SybilPool::from_ids(std::vector<NodeId> ids) {
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw std::invalid_argument("duplicate ids in pool");
    SybilPool pool;
    pool.ids_ = std::move(ids);
    return pool;
}

namespace {

// Emits ids from the sorted range [lo, hi) in ascending (id xor target)
// order. The range shares a prefix of `bit` bits; splitting at the next bit
// and visiting the target-matching half first preserves xor order.
void collect_closest(const std::vector<NodeId>& ids, size_t lo, size_t hi, int bit,
                     const NodeId& target, size_t k, std::vector<NodeId>& out) {
    if (lo >= hi || out.size() >= k) return;
    if (hi - lo == 1 || bit == 256) {
        for (size_t i = lo; i < hi && out.size() < k; ++i) out.push_back(ids[i]);
        return;
    }
    auto first = ids.begin() + static_cast<ptrdiff_t>(lo);
    auto last = ids.begin() + static_cast<ptrdiff_t>(hi);
    auto mid = std::partition_point(first, last,
                                    [bit](const NodeId& id) { return id.bit(bit) == 0; });
    size_t m = static_cast<size_t>(mid - ids.begin());
    if (target.bit(bit) == 0) {
        collect_closest(ids, lo, m, bit + 1, target, k, out);
        collect_closest(ids, m, hi, bit + 1, target, k, out);
    } else {
        collect_closest(ids, m, hi, bit + 1, target, k, out);
        collect_closest(ids, lo, m, bit + 1, target, k, out);
    }
}

}  // namespace

std::vector<NodeId> SybilPool::closest(const NodeId& target, size_t k) const {
    std::vector<NodeId> out;
    if (k == 0) return out;
    out.reserve(std::min(k, ids_.size()));
    collect_closest(ids_, 0, ids_.size(), 0, target, k, out);
    return out;
}

bool SybilPool::contains(const NodeId& id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
}

namespace {
constexpr char kPoolMagic[6] = {'S', 'P', 'O', 'O', 'L', '1'};
}

void SybilPool::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open pool file for writing: " + path);
    f.write(kPoolMagic, sizeof(kPoolMagic));
    uint64_t n = ids_.size();
    char count[8];
    for (int i = 0; i < 8; ++i) count[i] = static_cast<char>((n >> (8 * i)) & 0xff);
    f.write(count, 8);
    for (const NodeId& id : ids_) {
        char bytes[32];
        for (int w = 0; w < 4; ++w)
            for (int b = 0; b < 8; ++b)
                bytes[w * 8 + b] =
                    static_cast<char>((id.words[static_cast<size_t>(w)] >> (8 * (7 - b))) & 0xff);
        f.write(bytes, 32);
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

SybilPool SybilPool::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open pool file: " + path);
    char magic[6];
    f.read(magic, 6);
    if (!f || std::memcmp(magic, kPoolMagic, 6) != 0)
        throw std::runtime_error("not a pool file: " + path);
    char count[8];
    f.read(count, 8);
    if (!f) throw std::runtime_error("truncated pool file: " + path);
    uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n |= static_cast<uint64_t>(static_cast<uint8_t>(count[i])) << (8 * i);
    std::vector<NodeId> ids(n);
    for (uint64_t i = 0; i < n; ++i) {
        char bytes[32];
        f.read(bytes, 32);
        if (!f) throw std::runtime_error("truncated pool file: " + path);
        for (int w = 0; w < 4; ++w) {
            uint64_t v = 0;
            for (int b = 0; b < 8; ++b)
                v = (v << 8) | static_cast<uint8_t>(bytes[w * 8 + b]);
            ids[i].words[static_cast<size_t>(w)] = v;
        }
    }
    if (!std::is_sorted(ids.begin(), ids.end()))
        throw std::runtime_error("pool file ids not sorted: " + path);
    return from_ids(std::move(ids));
}

double min_beats_network_prob(uint64_t m, uint64_t n) {
    if (n == 0) return 0.0;
    if (m == 0) return 1.0;
    double per_draw = 1.0 / (static_cast<double>(m) + 1.0);
    return -std::expm1(static_cast<double>(n) * std::log1p(-per_draw));
}

}  // namespace eclipsim
