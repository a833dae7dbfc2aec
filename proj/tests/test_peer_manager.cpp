// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include <set>

#include "doctest.h"
#include "eclipsim/peer_manager.hpp"
#include "test_support.hpp"

using namespace eclipsim;
using eclipsim::test::id_at_distance;
using eclipsim::test::make_record;
using eclipsim::test::unique_subnet_ip;

namespace {

NodeId self_id() {
    return NodeId::from_hex("a0b1c2d3e4f5a6b7c8d9e0f1a2b3c4d5e6f7a8b9c0d1e2f3a4b5c6d7e8f9a0b1");
}

NodeRecord peer_rec(uint32_t i) {
    NodeId id;
    id.words[0] = 0x1111111111111111ULL * (1 + (i % 3));
    id.words[3] = i + 1;
    return make_record(id, unique_subnet_ip(i), static_cast<uint16_t>(40000 + i));
}

}  // namespace

TEST_SUITE_BEGIN("peer_manager");

TEST_CASE("slot split is a third outbound, rounded down") {
    CHECK(SlotConfig{25}.outbound_slots() == 8);
    CHECK(SlotConfig{25}.inbound_slots() == 17);
    CHECK(SlotConfig{50}.outbound_slots() == 16);
    CHECK(SlotConfig{50}.inbound_slots() == 34);
}

TEST_CASE("fill split favors the buffer for single slots") {
    DiscoveryTable table(self_id());
    for (uint32_t i = 0; i < 8; ++i)
        table.add_seen(make_record(id_at_distance(self_id(), 255, i), unique_subnet_ip(100 + i)));

    PeerManager mgr(self_id(), SlotConfig{25});
    // Occupy 7 of 8 outbound slots so exactly one is free.
    Rng rng(1);
    for (uint32_t i = 0; i < 7; ++i) {
        auto plan = mgr.fill_outbound(table, rng, ReadMode::Heads);
        (void)plan;
        // bypass dialing, wire a connection directly
        for (const auto& d : plan.dials) mgr.dial_failed(d.peer.id);
        mgr.push_lookup_results({peer_rec(900 + i)});
        auto p2 = mgr.fill_outbound(table, rng, ReadMode::Heads);
        REQUIRE(!p2.dials.empty());
        for (const auto& d : p2.dials) {
            if (mgr.outbound_count() < 7)
                mgr.dial_succeeded(d.peer, 0, kNeverEnds, d.provenance);
            else
                mgr.dial_failed(d.peer.id);
        }
    }
    REQUIRE(mgr.free_outbound() == 1);

    mgr.push_lookup_results({peer_rec(50), peer_rec(51)});
    auto plan = mgr.fill_outbound(table, rng, ReadMode::Heads);
    // floor(1/2) = 0 from the table, 1 from the buffer.
    REQUIRE(plan.dials.size() == 1);
    CHECK(plan.dials[0].provenance == Provenance::Buffer);
    CHECK(plan.dials[0].peer.id == peer_rec(50).id);
}

TEST_CASE("a fresh start splits eight slots four and four") {
    DiscoveryTable table(self_id());
    for (uint32_t i = 0; i < 10; ++i)
        table.add_seen(make_record(id_at_distance(self_id(), 239 + static_cast<int>(i), i),
                                   unique_subnet_ip(200 + i)));
    PeerManager mgr(self_id(), SlotConfig{25});
    std::vector<NodeRecord> buffered;
    for (uint32_t i = 0; i < 8; ++i) buffered.push_back(peer_rec(60 + i));
    mgr.push_lookup_results(buffered);

    Rng rng(2);
    auto plan = mgr.fill_outbound(table, rng, ReadMode::Heads);
    int from_table = 0, from_buffer = 0;
    for (const auto& d : plan.dials) {
        if (d.provenance == Provenance::Table) ++from_table;
        if (d.provenance == Provenance::Buffer) ++from_buffer;
    }
    CHECK(from_table == 4);
    CHECK(from_buffer == 4);
    // Buffer consumed strictly from the front.
    CHECK(plan.dials[4].peer.id == buffered[0].id);
    CHECK(plan.dials[7].peer.id == buffered[3].id);
    CHECK(mgr.pending_dials() == 8);
    CHECK(mgr.free_outbound() == 0);
}

TEST_CASE("two free slots go one and one, repeatedly") {
    DiscoveryTable table(self_id());
    for (uint32_t i = 0; i < 6; ++i)
        table.add_seen(make_record(id_at_distance(self_id(), 250 + static_cast<int>(i), i),
                                   unique_subnet_ip(300 + i)));
    PeerManager mgr(self_id(), SlotConfig{25});
    Rng rng(3);

    // Fill 6 slots, leave 2 free.
    int placed = 0;
    for (uint32_t i = 0; placed < 6; ++i) {
        mgr.push_lookup_results({peer_rec(700 + i)});
        auto plan = mgr.fill_outbound(table, rng, ReadMode::Heads);
        for (const auto& d : plan.dials) {
            if (placed < 6 && mgr.dial_succeeded(d.peer, 0, kNeverEnds, d.provenance)) ++placed;
            else mgr.dial_failed(d.peer.id);
        }
    }
    REQUIRE(mgr.free_outbound() == 2);

    for (int round = 0; round < 3; ++round) {
        mgr.push_lookup_results({peer_rec(800 + static_cast<uint32_t>(round))});
        auto plan = mgr.fill_outbound(table, rng, ReadMode::Heads);
        int from_table = 0, from_buffer = 0;
        for (const auto& d : plan.dials) {
            if (d.provenance == Provenance::Table) ++from_table;
            if (d.provenance == Provenance::Buffer) ++from_buffer;
        }
        CHECK(from_table <= 1);
        CHECK(from_buffer <= 1);
        for (const auto& d : plan.dials) mgr.dial_failed(d.peer.id);  // slots stay free
    }
}

TEST_CASE("an empty buffer requests a lookup instead of consuming") {
    DiscoveryTable table(self_id());
    PeerManager mgr(self_id(), SlotConfig{25});
    Rng rng(4);
    auto plan = mgr.fill_outbound(table, rng, ReadMode::Heads);
    CHECK(plan.dials.empty());  // table empty too
    CHECK(plan.start_lookup);
}

TEST_CASE("dials are deduplicated after source selection") {
    DiscoveryTable table(self_id());
    PeerManager mgr(self_id(), SlotConfig{25});
    Rng rng(5);

    // The same record twice in the buffer plus one already-connected peer and
    // one self record: only one real dial may come out, but the quota is spent.
    NodeRecord connected = peer_rec(1);
    mgr.push_lookup_results({connected});
    auto p0 = mgr.fill_outbound(table, rng, ReadMode::Heads);
    REQUIRE(p0.dials.size() == 1);
    REQUIRE(mgr.dial_succeeded(connected, 0, kNeverEnds, Provenance::Buffer).has_value());

    NodeRecord dup = peer_rec(2);
    mgr.push_lookup_results({dup, dup, connected, make_record(self_id(), unique_subnet_ip(9))});
    auto plan = mgr.fill_outbound(table, rng, ReadMode::Heads);
    REQUIRE(plan.dials.size() == 1);
    CHECK(plan.dials[0].peer.id == dup.id);
    CHECK(mgr.lookup_buffer_empty());  // all four buffered records consumed quota
}

TEST_CASE("inbound slots accept anyone until full in legacy mode") {
    PeerManager mgr(self_id(), SlotConfig{25});
    // 17 connections from a single IP address: all accepted.
    for (uint32_t i = 0; i < 17; ++i) {
        auto rec = make_record(peer_rec(i).id, IPv4::from_octets(203, 0, 113, 5),
                               static_cast<uint16_t>(50000 + i));
        CHECK(mgr.accept_inbound(rec, i * kNsPerSec) == AcceptOutcome::Accepted);
    }
    CHECK(mgr.inbound_count() == 17);
    auto extra = make_record(peer_rec(99).id, IPv4::from_octets(203, 0, 113, 5), 51000);
    CHECK(mgr.accept_inbound(extra, 20 * kNsPerSec) == AcceptOutcome::RejectedFull);
}

TEST_CASE("the 30s throttle spaces accepted attempts per IP") {
    PeerManager mgr(self_id(), SlotConfig{25});
    mgr.set_inbound_throttle(true);
    IPv4 ip = IPv4::from_octets(198, 51, 100, 7);

    CHECK(mgr.accept_inbound(make_record(peer_rec(1).id, ip, 50001), 0) ==
          AcceptOutcome::Accepted);
    // 10 s later: same IP, rejected.
    CHECK(mgr.accept_inbound(make_record(peer_rec(2).id, ip, 50002), 10 * kNsPerSec) ==
          AcceptOutcome::RejectedThrottled);
    // A different IP is unaffected.
    CHECK(mgr.accept_inbound(make_record(peer_rec(3).id, IPv4::from_octets(198, 51, 101, 7), 50003),
                             11 * kNsPerSec) == AcceptOutcome::Accepted);
    // 31 s after the first attempt the IP may come back.
    CHECK(mgr.accept_inbound(make_record(peer_rec(4).id, ip, 50004), 31 * kNsPerSec) ==
          AcceptOutcome::Accepted);
}

TEST_CASE("disconnect frees the slot; unknown peers are a no-op") {
    PeerManager mgr(self_id(), SlotConfig{25});
    NodeRecord rec = peer_rec(5);
    CHECK(mgr.accept_inbound(rec, 0) == AcceptOutcome::Accepted);
    CHECK(mgr.on_disconnect(rec.id, kNsPerSec));
    CHECK(mgr.inbound_count() == 0);
    CHECK(!mgr.on_disconnect(rec.id, 2 * kNsPerSec));
}

TEST_CASE("slot conservation holds through arbitrary churn") {
    DiscoveryTable table(self_id());
    for (uint32_t i = 0; i < 12; ++i)
        table.add_seen(make_record(id_at_distance(self_id(), 244 + static_cast<int>(i % 12), i),
                                   unique_subnet_ip(400 + i)));
    PeerManager mgr(self_id(), SlotConfig{25});
    Rng rng(6);
    std::vector<NodeRecord> connected;
    for (int step = 0; step < 500; ++step) {
        switch (rng.bounded(4)) {
            case 0: {
                mgr.push_lookup_results({peer_rec(1000 + static_cast<uint32_t>(step))});
                auto plan = mgr.fill_outbound(table, rng, ReadMode::Heads);
                for (const auto& d : plan.dials) {
                    if (rng.bounded(2) == 0) {
                        auto c = mgr.dial_succeeded(d.peer, step, kNeverEnds, d.provenance);
                        if (c) connected.push_back(c->peer);
                    } else {
                        mgr.dial_failed(d.peer.id);
                    }
                }
                break;
            }
            case 1: {
                auto rec = peer_rec(2000 + static_cast<uint32_t>(step));
                if (mgr.accept_inbound(rec, step) == AcceptOutcome::Accepted)
                    connected.push_back(rec);
                break;
            }
            default: {
                if (!connected.empty()) {
                    size_t i = rng.bounded(connected.size());
                    mgr.on_disconnect(connected[i].id, step);
                    connected.erase(connected.begin() + static_cast<ptrdiff_t>(i));
                }
                break;
            }
        }
        CHECK(mgr.outbound_count() + mgr.free_outbound() + mgr.pending_dials() ==
              mgr.slots().outbound_slots());
        CHECK(mgr.inbound_count() + mgr.free_inbound() == mgr.slots().inbound_slots());
        CHECK(mgr.outbound_count() <= mgr.slots().outbound_slots());
        CHECK(mgr.inbound_count() <= mgr.slots().inbound_slots());
    }
}

TEST_CASE("eclipse detection needs full slots and all-adversarial peers") {
    PeerManager mgr(self_id(), SlotConfig{25});
    std::set<NodeId> adversary;
    DiscoveryTable table(self_id());
    Rng rng(7);

    // 8 adversarial outbound
    for (uint32_t i = 0; i < 8; ++i) {
        NodeRecord rec = peer_rec(100 + i);
        adversary.insert(rec.id);
        mgr.push_lookup_results({rec});
        auto plan = mgr.fill_outbound(table, rng, ReadMode::Heads);
        REQUIRE(plan.dials.size() == 1);
        REQUIRE(mgr.dial_succeeded(plan.dials[0].peer, 0, kNeverEnds, Provenance::Buffer));
    }
    // 16 adversarial inbound; one slot left open.
    for (uint32_t i = 0; i < 16; ++i) {
        NodeRecord rec = peer_rec(200 + i);
        adversary.insert(rec.id);
        REQUIRE(mgr.accept_inbound(rec, 0) == AcceptOutcome::Accepted);
    }
    auto is_adv = [&](const NodeId& id) { return adversary.count(id) > 0; };
    CHECK(!mgr.is_eclipsed(is_adv));  // an empty slot can still go to an honest peer

    // Fill the last slot with an honest peer: still not eclipsed.
    NodeRecord honest = peer_rec(300);
    REQUIRE(mgr.accept_inbound(honest, 0) == AcceptOutcome::Accepted);
    CHECK(!mgr.is_eclipsed(is_adv));

    // Swap it for an adversarial one: eclipsed.
    mgr.on_disconnect(honest.id, kNsPerSec);
    NodeRecord last = peer_rec(301);
    adversary.insert(last.id);
    REQUIRE(mgr.accept_inbound(last, kNsPerSec) == AcceptOutcome::Accepted);
    CHECK(mgr.is_eclipsed(is_adv));
}

TEST_SUITE_END();
