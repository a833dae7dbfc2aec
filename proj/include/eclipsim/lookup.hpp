// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "eclipsim/table.hpp"

namespace eclipsim {

constexpr int kLookupRoundCap = 64;  // safety net; never reached on finite networks

struct LookupResult {
    NodeId target;
    std::vector<NodeRecord> nodes;  // ascending by xor-distance to target, <= keep
    int rounds = 0;
    std::vector<NodeId> queried;  // every id that was sent a FindNode
};

struct LookupRoundCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Round structure of the iterative lookup, factored out so that both the
/// synchronous driver below and the event-driven simulator run the identical
/// algorithm: each round queries every not-yet-queried candidate, merges all
/// responses with the candidate set, keeps the `keep` closest to the target,
/// and stops when a round leaves the candidate set unchanged.
class LookupEngine {
public:
    LookupEngine(NodeId self, NodeId target, std::vector<NodeRecord> initial, size_t keep = kBucketSize);

    /// Candidates to query this round (may be empty, in which case the lookup
    /// is already done).
    std::vector<NodeRecord> pending_queries() const;

    /// Marks a candidate as queried at send time; idempotent. The simulator
    /// uses this so a peer that never answers still counts as queried.
    void mark_queried(const NodeId& id);

    void record_response(const NodeId& from, const std::vector<NodeRecord>& nodes);

    /// Ends the round: merge, trim, detect the fixed point. Returns true when
    /// the lookup has converged. Throws LookupRoundCapExceeded past 64 rounds.
    bool finish_round();

    bool done() const { return done_; }
    LookupResult result() const;

    /// Current candidate set, ascending by xor-distance to the target.
    std::vector<NodeRecord> candidates() const { return candidates_; }

private:
    bool known(const NodeId& id) const;

    NodeId self_;
    NodeId target_;
    size_t keep_;
    std::vector<NodeRecord> candidates_;  // sorted ascending by xor_less to target
    std::vector<NodeId> queried_;         // in query order
    std::vector<NodeRecord> round_responses_;
    int rounds_ = 0;
    bool done_ = false;
};

/// Answer to a FindNode request: the responder's closest known entries.
std::vector<NodeRecord> handle_findnode(const DiscoveryTable& responder, const NodeId& target,
                                        size_t limit);

using QueryFn = std::function<std::vector<NodeRecord>(const NodeRecord&, const NodeId&)>;

/// Synchronous lookup driver. `query` returns a remote node's answer to a
/// FindNode for the target; an empty list models a timeout.
LookupResult run_lookup(const DiscoveryTable& initiator, const NodeId& target, const QueryFn& query,
                        size_t keep = kBucketSize);

inline NodeId random_target(Rng& rng) { return generate_id(rng); }

}  // namespace eclipsim
