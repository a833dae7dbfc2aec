// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "eclipsim/table.hpp"

namespace eclipsim {

using SimTime = int64_t;  // simulated nanoseconds

constexpr SimTime kNsPerMs = 1'000'000;
constexpr SimTime kNsPerSec = 1'000'000'000;
constexpr SimTime kNsPerMin = 60 * kNsPerSec;
constexpr SimTime kNsPerHour = 60 * kNsPerMin;
constexpr SimTime kNsPerDay = 24 * kNsPerHour;
constexpr SimTime kNeverEnds = INT64_MAX;

/// Connection slot split: a third of max_peers (rounded down) dials out, the
/// rest accepts inbound. 25 peers gives 8 outbound / 17 inbound, 50 gives
/// 16 / 34.
struct SlotConfig {
    int max_peers = 25;

    int outbound_slots() const { return max_peers / 3; }
    int inbound_slots() const { return max_peers - max_peers / 3; }
};

enum class Direction { In, Out };
enum class Provenance { Table, Buffer, Inbound };

struct Connection {
    NodeRecord peer;
    Direction direction = Direction::In;
    SimTime established_at = 0;
    SimTime scheduled_end = kNeverEnds;
    Provenance provenance = Provenance::Inbound;
};

enum class AcceptOutcome { Accepted, RejectedFull, RejectedThrottled };

struct DialDecision {
    NodeRecord peer;
    Provenance provenance = Provenance::Table;
};

struct FillPlan {
    std::vector<DialDecision> dials;
    bool start_lookup = false;  // buffer ran dry; refill before the next fill
};

/// DEVp2p-style connection management for one node: inbound/outbound slot
/// accounting, the outbound fill split between the table and the
/// lookup-buffer, and optional per-IP inbound throttling.
class PeerManager {
public:
    PeerManager(NodeId self, SlotConfig cfg) : self_(self), cfg_(cfg) {}

    void set_inbound_throttle(bool enabled, SimTime window = 30 * kNsPerSec) {
        throttle_enabled_ = enabled;
        throttle_window_ = window;
    }

    const SlotConfig& slots() const { return cfg_; }
    int outbound_count() const;
    int inbound_count() const;
    int free_outbound() const { return cfg_.outbound_slots() - outbound_count() - pending_dials_; }
    int free_inbound() const { return cfg_.inbound_slots() - inbound_count(); }
    int pending_dials() const { return pending_dials_; }

    /// One fill round per the outbound flow: with n currently free slots,
    /// floor(n/2) candidates come from the table and the rest from the front
    /// of the lookup-buffer. Deduplication against self, existing connections,
    /// in-flight dials and duplicates happens after source selection, so each
    /// source contributes at most its quota. Every returned dial is already
    /// registered as pending.
    FillPlan fill_outbound(const DiscoveryTable& table, Rng& rng, ReadMode mode);

    /// Resolution callbacks for dials handed out by fill_outbound.
    void dial_failed(const NodeId& peer);
    std::optional<Connection> dial_succeeded(const NodeRecord& peer, SimTime now,
                                             SimTime scheduled_end, Provenance provenance);

    AcceptOutcome accept_inbound(const NodeRecord& peer, SimTime now,
                                 SimTime scheduled_end = kNeverEnds);

    /// Removes the connection; unknown peers are a no-op (reported false).
    bool on_disconnect(const NodeId& peer, SimTime now);

    bool connected(const NodeId& id) const;

    /// True iff every slot (inbound and outbound) is occupied and every
    /// connected peer satisfies the adversary predicate.
    bool is_eclipsed(const std::function<bool(const NodeId&)>& adversarial) const;

    const std::vector<Connection>& connections() const { return conns_; }

    void push_lookup_results(const std::vector<NodeRecord>& nodes);
    const std::deque<NodeRecord>& lookup_buffer() const { return lookup_buffer_; }
    bool lookup_buffer_empty() const { return lookup_buffer_.empty(); }

private:
    void dial_done(const NodeId& peer);

    NodeId self_;
    SlotConfig cfg_;
    std::vector<Connection> conns_;  // insertion order; <= max_peers entries
    std::deque<NodeRecord> lookup_buffer_;
    std::vector<NodeId> dialing_;  // in-flight dial targets
    int pending_dials_ = 0;
    bool throttle_enabled_ = false;
    SimTime throttle_window_ = 30 * kNsPerSec;
    std::map<uint32_t, SimTime> last_inbound_attempt_;  // by IPv4 address
};

}  // namespace eclipsim
