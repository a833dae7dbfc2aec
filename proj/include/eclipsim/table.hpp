// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#pragma once

#include <array>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "eclipsim/mining.hpp"
#include "eclipsim/node_id.hpp"
#include "eclipsim/rng.hpp"

#include "json.hpp"

namespace eclipsim {

constexpr size_t kBucketSize = 16;       // entries per bucket
constexpr size_t kReplacementSize = 10;  // replacement list per bucket
constexpr size_t kBucketSubnetLimit = 2;   // same-/24 entries per bucket
constexpr size_t kTableSubnetLimit = 10;   // same-/24 entries per table
constexpr size_t kReadRandomDefaultMax = 4;

enum class AddOutcome {
    Bumped,            // already in its bucket, moved to the front
    Added,             // inserted at the front of a non-full bucket
    ReplacementAdded,  // bucket full, appended to the replacement list
    RejectedSubnet,    // /24 restriction violated, no state change
    Noop,              // already in the replacement list
};

enum class ReadMode {
    Heads,    // head of randomly chosen distinct non-empty buckets
    Uniform,  // uniform over all bucket entries, without replacement
};

struct Bucket {
    int distance = 0;
    // Front = most recently active.
    std::deque<NodeRecord> entries;
    // FIFO: newest at the back; the oldest is evicted when a previously
    // unknown record arrives at capacity.
    std::deque<NodeRecord> replacements;
};

struct RevalidationOutcome {
    bool probed = false;  // false iff all buckets were empty
    NodeRecord probed_record;
    int bucket_distance = 0;
    bool alive = false;
    std::optional<NodeRecord> promoted;
};

/// discv4-style discovery table: 17 k-buckets over log-distances 239..255
/// plus per-bucket replacement lists and /24 subnet accounting. Ids at
/// log-distance below 239 are folded into the lowest bucket.
class DiscoveryTable {
public:
    explicit DiscoveryTable(const NodeId& local);

    const NodeId& local_id() const { return local_; }

    /// Bucket index (0 == distance 239) for an id. Throws on id == local.
    int bucket_index_for(const NodeId& id) const;
    const Bucket& bucket_for(const NodeId& id) const;
    const Bucket& bucket_at_distance(int distance) const;

    /// Entry flow on an unsolicited ping or a pong reply.
    AddOutcome add_seen(const NodeRecord& rec);

    /// Probes the last entry of one uniformly random non-empty bucket. A live
    /// entry is bumped to the front; a dead one is removed and a random
    /// eligible replacement (subnet limits re-checked against the post-removal
    /// state) is inserted at the tail.
    RevalidationOutcome revalidate_step(Rng& rng,
                                        const std::function<bool(const NodeRecord&)>& liveness);

    std::vector<NodeRecord> read_random_nodes(size_t max, Rng& rng, ReadMode mode) const;

    /// Default read size used by the peer management's table source.
    std::vector<NodeRecord> read_random_nodes(Rng& rng, ReadMode mode) const {
        return read_random_nodes(kReadRandomDefaultMax, rng, mode);
    }

    /// The k entries minimizing xor-distance to target, ascending. Exact over
    /// all bucket entries; replacement lists are not consulted.
    std::vector<NodeRecord> closest_known(const NodeId& target, size_t k = kBucketSize) const;

    bool contains(const NodeId& id) const;
    size_t entry_count() const { return entry_count_; }
    size_t nonempty_bucket_count() const;
    const std::array<Bucket, kBucketCount>& buckets() const { return buckets_; }

    /// Recomputes every structural invariant from scratch and throws
    /// std::logic_error with a description on the first violation.
    void audit() const;

    nlohmann::ordered_json snapshot() const;

private:
    bool subnet_ok(const Bucket& b, SubnetKey subnet) const;
    size_t table_subnet_count(SubnetKey subnet) const;
    void on_entry_added(const NodeRecord& rec);
    void on_entry_removed(const NodeRecord& rec);

    NodeId local_;
    std::array<Bucket, kBucketCount> buckets_;
    std::map<SubnetKey, size_t> subnet_counts_;  // over bucket entries only
    size_t entry_count_ = 0;
};

nlohmann::ordered_json record_to_json(const NodeRecord& rec);
NodeRecord record_from_json(const nlohmann::json& j);

}  // namespace eclipsim
