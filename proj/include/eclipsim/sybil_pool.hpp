// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eclipsim/node_id.hpp"
#include "eclipsim/rng.hpp"

namespace eclipsim {

/// Pre-computed pool of distinct node ids with exact k-nearest-by-xor
/// queries. Ids are held sorted ascending; a query walks the implicit binary
/// trie over that order, visiting branches in xor-proximity order relative to
/// the target, so it touches O(k + log n) ids instead of scanning the pool.
class SybilPool {
public:
    SybilPool() = default;

    /// n distinct uniform ids, deterministic for a fixed generator state.
    static SybilPool build(size_t n, Rng& rng);

    /// Takes ownership of an arbitrary id set. Throws std::invalid_argument
    /// on duplicates.
    static SybilPool from_ids(std::vector<NodeId> ids);

    size_t size() const { return ids_.size(); }

    /// The min(k, size()) pool ids closest to target under the xor metric,
    /// ascending. Exact.
    std::vector<NodeId> closest(const NodeId& target, size_t k) const;

    bool contains(const NodeId& id) const;

    const std::vector<NodeId>& ids() const { return ids_; }

    // Flat file format: magic "SPOOL1", 8-byte little-endian count, then
    // count x 32-byte big-endian ids sorted ascending.
    void save(const std::string& path) const;
    static SybilPool load(const std::string& path);

private:
    std::vector<NodeId> ids_;  // sorted ascending
};

/// Probability that the minimum of n fresh uniform draws beats the minimum of
/// m competing uniform draws under any fixed distance permutation:
/// 1 - (1 - 1/(m+1))^n.
double min_beats_network_prob(uint64_t m, uint64_t n);

}  // namespace eclipsim
