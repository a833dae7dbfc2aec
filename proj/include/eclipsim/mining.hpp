// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>

#include "eclipsim/node_id.hpp"
#include "eclipsim/rng.hpp"

#include "json.hpp"

namespace eclipsim {

// The discovery table keeps 17 buckets covering log-distances 239..255;
// anything closer is folded into the lowest bucket.
constexpr int kMinBucketDistance = 239;
constexpr int kMaxBucketDistance = 255;
constexpr int kBucketCount = kMaxBucketDistance - kMinBucketDistance + 1;

/// Result of mining one id: the id found and how many generations it took.
struct MiningReport {
    NodeId id;
    uint64_t attempts = 0;  // counts every generation including the hit
};

inline nlohmann::ordered_json to_json(const MiningReport& r) {
    return {{"id", r.id.to_hex()}, {"attempts", r.attempts}};
}

struct MiningCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform 256-bit id; stands in for keygen + hash of the public key.
inline NodeId generate_id(Rng& rng) {
    NodeId id;
    for (auto& w : id.words) w = rng.next_u64();
    return id;
}

/// Rejection-samples ids until one lands at exactly log-distance d from
/// local. d must lie in the bucket range [239, 255]. Aborts with
/// MiningCapExceeded after cap_factor times the expected number of attempts;
/// at the default 64x the abort probability is below 1e-27 for an unbiased
/// generator.
MiningReport mine_id_for_distance(const NodeId& local, int d, Rng& rng,
                                  uint64_t cap_factor = 64);

/// One mined id per bucket distance 239..255 (17 ids, necessarily distinct).
std::map<int, MiningReport> mine_bucket_set(const NodeId& local, Rng& rng);

}  // namespace eclipsim
