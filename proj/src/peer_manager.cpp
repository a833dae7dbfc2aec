// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include "eclipsim/peer_manager.hpp"

#include <algorithm>

namespace eclipsim {

int PeerManager::outbound_count() const {
    return static_cast<int>(std::count_if(conns_.begin(), conns_.end(), [](const Connection& c) {
        return c.direction == Direction::Out;
    }));
}

int PeerManager::inbound_count() const {
    return static_cast<int>(conns_.size()) - outbound_count();
}

bool PeerManager::connected(const NodeId& id) const {
    return std::any_of(conns_.begin(), conns_.end(),
                       [&](const Connection& c) { return c.peer.id == id; });
}

FillPlan PeerManager::fill_outbound(const DiscoveryTable& table, Rng& rng, ReadMode mode) {
    FillPlan plan;
    int n = free_outbound();
    if (n <= 0) return plan;
    size_t table_quota = static_cast<size_t>(n / 2);
    size_t buffer_quota = static_cast<size_t>(n) - table_quota;

    std::vector<DialDecision> picked;
    if (table_quota > 0)
        for (const auto& rec : table.read_random_nodes(table_quota, rng, mode))
            picked.push_back({rec, Provenance::Table});
    for (size_t i = 0; i < buffer_quota && !lookup_buffer_.empty(); ++i) {
        picked.push_back({lookup_buffer_.front(), Provenance::Buffer});
        lookup_buffer_.pop_front();
    }
    if (lookup_buffer_.empty() && buffer_quota > 0) plan.start_lookup = true;

    // Dedup after source selection: a filtered pick still consumed its quota.
    for (const auto& d : picked) {
        if (d.peer.id == self_) continue;
        if (connected(d.peer.id)) continue;
        if (std::any_of(plan.dials.begin(), plan.dials.end(),
                        [&](const DialDecision& e) { return e.peer.id == d.peer.id; }))
            continue;
        if (std::find(dialing_.begin(), dialing_.end(), d.peer.id) != dialing_.end()) continue;
        plan.dials.push_back(d);
    }
    for (const auto& d : plan.dials) dialing_.push_back(d.peer.id);
    pending_dials_ += static_cast<int>(plan.dials.size());
    return plan;
}

void PeerManager::dial_done(const NodeId& peer) {
    auto it = std::find(dialing_.begin(), dialing_.end(), peer);
    if (it != dialing_.end()) dialing_.erase(it);
    --pending_dials_;
}

void PeerManager::dial_failed(const NodeId& peer) { dial_done(peer); }

std::optional<Connection> PeerManager::dial_succeeded(const NodeRecord& peer, SimTime now,
                                                      SimTime scheduled_end,
                                                      Provenance provenance) {
    dial_done(peer.id);
    if (cfg_.outbound_slots() - outbound_count() <= 0) return std::nullopt;
    if (connected(peer.id)) return std::nullopt;
    Connection c{peer, Direction::Out, now, scheduled_end, provenance};
    conns_.push_back(c);
    return c;
}

AcceptOutcome PeerManager::accept_inbound(const NodeRecord& peer, SimTime now,
                                          SimTime scheduled_end) {
    if (throttle_enabled_) {
        auto it = last_inbound_attempt_.find(peer.ip.addr);
        if (it != last_inbound_attempt_.end() && now - it->second < throttle_window_)
            return AcceptOutcome::RejectedThrottled;
        last_inbound_attempt_[peer.ip.addr] = now;
    }
    if (free_inbound() <= 0 || connected(peer.id)) return AcceptOutcome::RejectedFull;
    conns_.push_back({peer, Direction::In, now, scheduled_end, Provenance::Inbound});
    return AcceptOutcome::Accepted;
}

bool PeerManager::on_disconnect(const NodeId& peer, SimTime) {
    auto it = std::find_if(conns_.begin(), conns_.end(),
                           [&](const Connection& c) { return c.peer.id == peer; });
    if (it == conns_.end()) return false;
    conns_.erase(it);
    return true;
}

bool PeerManager::is_eclipsed(const std::function<bool(const NodeId&)>& adversarial) const {
    if (static_cast<int>(conns_.size()) != cfg_.max_peers) return false;
    return std::all_of(conns_.begin(), conns_.end(),
                       [&](const Connection& c) { return adversarial(c.peer.id); });
}

void PeerManager::push_lookup_results(const std::vector<NodeRecord>& nodes) {
    for (const auto& n : nodes) lookup_buffer_.push_back(n);
}

}  // namespace eclipsim
