// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#pragma once

#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "eclipsim/attacker.hpp"
#include "eclipsim/lookup.hpp"
#include "eclipsim/peer_manager.hpp"
#include "eclipsim/scenario.hpp"

namespace eclipsim {

enum class TraceKind {
    AttackStart,
    Connect,
    Disconnect,
    LookupStart,
    LookupDone,
    Eclipse,
    // full-trace extras
    SybilPing,
    Revalidate,
    TableAdd,
};

struct TraceEvent {
    SimTime time = 0;
    TraceKind kind = TraceKind::Connect;
    NodeId peer;
    Direction direction = Direction::In;
    Provenance provenance = Provenance::Inbound;
    NodeId target;
    int rounds = 0;
    int adversarial = 0;
    int result_size = 0;
    bool alive = false;
    AddOutcome add_outcome = AddOutcome::Added;
};

struct SimOutcome {
    bool eclipsed = false;
    SimTime eclipse_time_ns = 0;  // absolute simulated time
    uint64_t seed = 0;
};

struct SimTrace {
    std::vector<TraceEvent> events;  // non-decreasing in time
    SimOutcome outcome;
    SimTime attack_start_ns = 0;

    /// Newline-delimited JSON; the final line is the outcome record.
    std::string to_ndjson() const;
    void write_ndjson(std::ostream& os) const;
};

/// Deterministic discrete-event run of one scenario: a victim node with full
/// discovery and peer management, a population of honest nodes answering
/// FindNode from their own tables, and optionally the attacker. The trace is
/// a pure function of the configuration.
class Simulation {
public:
    explicit Simulation(const ScenarioConfig& cfg);

    SimTrace run();

    /// Drains events with timestamps <= t; for white-box tests.
    void run_until(SimTime t);

    SimTime now() const { return now_; }
    bool eclipsed() const { return eclipsed_; }
    const DiscoveryTable& victim_table() const { return *victim_table_; }
    const PeerManager& victim_peers() const { return *victim_peers_; }
    const Attacker* attacker() const { return attacker_ ? &*attacker_ : nullptr; }
    const NodeRecord& victim_record() const { return victim_rec_; }
    const std::vector<TraceEvent>& events() const { return trace_.events; }
    SimTrace take_trace();

private:
    struct HonestNode {
        NodeRecord rec;
        DiscoveryTable table;
    };

    enum class EvKind {
        AttackStart,
        SybilPing,
        FillerAttempt,
        Revalidate,
        DialResolve,
        Disconnect,
        LookupReply,
        LookupTimeout,
        FillRetry,
        FillPass,
        AmbientPing,
        RefreshTick,
    };

    struct Event {
        SimTime at = 0;
        uint64_t seq = 0;
        EvKind kind = EvKind::Revalidate;
        int index = 0;            // sybil / filler index
        NodeRecord peer;          // dial target, disconnect peer, lookup responder
        Provenance provenance = Provenance::Table;
        bool flag = false;        // dial success
        SimTime stamp = 0;        // scheduled_end or established_at
        std::vector<NodeRecord> payload;  // neighbors records
        uint64_t gen = 0;         // lookup generation guard

        bool operator>(const Event& o) const {
            return at != o.at ? at > o.at : seq > o.seq;
        }
    };

    struct LookupState {
        LookupEngine engine;
        uint64_t gen = 0;
        int outstanding = 0;
        NodeId target;
        bool refresh = false;  // table-refresh lookups bond but skip the buffer
    };

    void schedule(SimTime at, Event ev);
    void handle(const Event& ev);

    void setup_population();
    void setup_attack_plan();
    void start_attack();

    void request_fill();
    void fill_pass();
    void launch_dial(const DialDecision& d);
    void maybe_start_lookup();
    void start_lookup(const NodeId& target, bool refresh);
    void begin_lookup_round();
    void advance_lookup();
    void pump_refresh();
    void mark_knows_victim(size_t honest_index);
    void schedule_ambient_ping();
    void complete_disconnect(const Event& ev);
    void filler_attempt(int index);
    void wake_parked_fillers();
    void eclipse_check();
    void emit(TraceEvent ev);
    bool adversarial_id(const NodeId& id) const;
    SimTime one_way_latency();
    SimTime rtt() { return one_way_latency() + one_way_latency(); }

    const HonestNode* honest_by_id(const NodeId& id) const;
    HonestNode* honest_by_id(const NodeId& id);

    ScenarioConfig cfg_;
    SimTime now_ = 0;
    uint64_t seq_ = 0;
    bool eclipsed_ = false;
    bool attack_active_ = false;
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue_;

    Rng rng_latency_, rng_churn_, rng_reval_, rng_rrn_, rng_target_, rng_dial_, rng_sched_,
        rng_ambient_;

    NodeRecord victim_rec_;
    std::optional<DiscoveryTable> victim_table_;
    std::optional<PeerManager> victim_peers_;
    std::vector<HonestNode> honest_;
    std::unordered_map<NodeId, size_t, NodeIdHash> honest_index_;
    std::optional<Attacker> attacker_;

    std::optional<LookupState> lookup_;
    uint64_t lookup_gen_ = 0;
    SimTime next_lookup_ok_ = 0;
    bool fill_retry_scheduled_ = false;
    bool fill_pass_scheduled_ = false;
    bool dialer_wants_lookup_ = false;
    std::vector<int> parked_fillers_;
    std::vector<NodeId> refresh_targets_;  // pending targets of the current refresh cycle
    std::vector<uint8_t> knows_victim_;    // per honest node
    std::vector<size_t> knowers_;          // honest indices with the victim in their table

    SimTrace trace_;
};

/// Convenience wrapper: build, run, return the trace.
SimTrace run_scenario(const ScenarioConfig& cfg);

}  // namespace eclipsim
