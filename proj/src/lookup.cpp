// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include "eclipsim/lookup.hpp"

#include <algorithm>

namespace eclipsim {

LookupEngine::LookupEngine(NodeId self, NodeId target, std::vector<NodeRecord> initial,
                           size_t keep)
    : self_(self), target_(target), keep_(keep), candidates_(std::move(initial)) {
    std::sort(candidates_.begin(), candidates_.end(), [&](const NodeRecord& a, const NodeRecord& b) {
        return xor_less(a.id, b.id, target_);
    });
    if (candidates_.size() > keep_) candidates_.resize(keep_);
}

bool LookupEngine::known(const NodeId& id) const {
    return std::any_of(candidates_.begin(), candidates_.end(),
                       [&](const NodeRecord& c) { return c.id == id; });
}

std::vector<NodeRecord> LookupEngine::pending_queries() const {
    std::vector<NodeRecord> out;
    for (const auto& c : candidates_)
        if (std::find(queried_.begin(), queried_.end(), c.id) == queried_.end())
            out.push_back(c);
    return out;
}

void LookupEngine::mark_queried(const NodeId& id) {
    if (std::find(queried_.begin(), queried_.end(), id) == queried_.end())
        queried_.push_back(id);
}

void LookupEngine::record_response(const NodeId& from, const std::vector<NodeRecord>& nodes) {
    mark_queried(from);
    for (const auto& n : nodes) round_responses_.push_back(n);
}

bool LookupEngine::finish_round() {
    ++rounds_;
    if (rounds_ > kLookupRoundCap)
        throw LookupRoundCapExceeded("lookup exceeded 64 rounds");

    std::vector<NodeRecord> merged = candidates_;
    for (const auto& n : round_responses_) {
        if (n.id == self_) continue;
        if (std::any_of(merged.begin(), merged.end(),
                        [&](const NodeRecord& m) { return m.id == n.id; }))
            continue;
        merged.push_back(n);
    }
    round_responses_.clear();

    std::sort(merged.begin(), merged.end(), [&](const NodeRecord& a, const NodeRecord& b) {
        return xor_less(a.id, b.id, target_);
    });
    if (merged.size() > keep_) merged.resize(keep_);

    bool unchanged = merged.size() == candidates_.size() &&
                     std::equal(merged.begin(), merged.end(), candidates_.begin(),
                                [](const NodeRecord& a, const NodeRecord& b) { return a.id == b.id; });
    candidates_ = std::move(merged);
    if (unchanged) done_ = true;
    return done_;
}

LookupResult LookupEngine::result() const {
    LookupResult r;
    r.target = target_;
    r.nodes = candidates_;
    r.rounds = rounds_;
    r.queried = queried_;
    return r;
}

std::vector<NodeRecord> handle_findnode(const DiscoveryTable& responder, const NodeId& target,
                                        size_t limit) {
    return responder.closest_known(target, limit);
}

LookupResult run_lookup(const DiscoveryTable& initiator, const NodeId& target, const QueryFn& query,
                        size_t keep) {
    LookupEngine engine(initiator.local_id(), target, initiator.closest_known(target, keep), keep);
    for (;;) {
        for (const auto& peer : engine.pending_queries())
            engine.record_response(peer.id, query(peer, target));
        if (engine.finish_round()) return engine.result();
    }
}

}  // namespace eclipsim
