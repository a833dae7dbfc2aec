// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include "eclipsim/mining.hpp"

#include <algorithm>

namespace eclipsim {

MiningReport mine_id_for_distance(const NodeId& local, int d, Rng& rng, uint64_t cap_factor) {
    if (d < kMinBucketDistance || d > kMaxBucketDistance)
        throw std::invalid_argument("mining distance must be in [239, 255], got " +
                                    std::to_string(d));
    const uint64_t cap = std::max<uint64_t>((uint64_t{1} << (256 - d)) * cap_factor, 1);
    MiningReport report;
    for (;;) {
        NodeId candidate = generate_id(rng);
        ++report.attempts;
        auto dist = log_distance(local, candidate);
        if (dist && *dist == d) {
            report.id = candidate;
            return report;
        }
        if (report.attempts >= cap)
            throw MiningCapExceeded("exceeded " + std::to_string(cap) +
                                    " attempts mining distance " + std::to_string(d));
    }
}

std::map<int, MiningReport> mine_bucket_set(const NodeId& local, Rng& rng) {
    std::map<int, MiningReport> out;
    for (int d = kMinBucketDistance; d <= kMaxBucketDistance; ++d)
        out.emplace(d, mine_id_for_distance(local, d, rng));
    return out;
}

}  // namespace eclipsim
