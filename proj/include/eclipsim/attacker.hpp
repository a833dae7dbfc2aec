// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "eclipsim/scenario.hpp"
#include "eclipsim/sybil_pool.hpp"
#include "eclipsim/table.hpp"

namespace eclipsim {

/// Everything a run of the attack needs: one mined id per victim bucket, the
/// pre-computed pool for poisoning lookups, and the two /24 subnets all sybil
/// endpoints live in.
struct AttackPlan {
    NodeId victim_id;
    std::map<int, NodeRecord> bucket_sybils;       // distance -> record
    std::map<int, uint64_t> mining_attempts;       // distance -> generations spent
    SybilPool pool;
    std::array<SubnetKey, 2> subnets;
    double ping_interval_s = 3.0;
    int inbound_fillers = 40;
    int addresses_per_subnet = 16;

    /// Plan metadata as JSON; the pool itself is referenced by file name.
    nlohmann::ordered_json to_json(const std::string& pool_file) const;
    static AttackPlan from_json(const nlohmann::json& j, SybilPool pool);

    void check() const;  // throws std::logic_error on a malformed plan
};

/// Mines the 17 bucket ids, builds the pool, and lays the sybil endpoints out
/// over two /24 subnets: ten records in the first and seven in the second,
/// the most the table-wide limit of ten per /24 allows for 17 entries from
/// two subnets.
AttackPlan prepare_attack(const NodeId& victim_id, size_t pool_size, Rng& rng,
                          const AttackConfig& cfg = {});

/// Stateless sybil endpoint behavior shared by the simulator and the tests.
class Attacker {
public:
    explicit Attacker(AttackPlan plan);

    const AttackPlan& plan() const { return plan_; }

    /// True iff the id belongs to any attacker-controlled identity: a bucket
    /// sybil, a pool id, or an inbound filler.
    bool owns(const NodeId& id) const;

    /// Poisoned FindNode answer: the pool's closest ids to the target, mapped
    /// onto live sybil endpoints inside the two subnets.
    std::vector<NodeRecord> poison_findnode(const NodeId& target, size_t limit) const;

    /// A concrete endpoint for any pool id; stable across calls.
    NodeRecord pool_endpoint(const NodeId& id) const;

    const std::vector<NodeRecord>& fillers() const { return fillers_; }

private:
    AttackPlan plan_;
    std::vector<NodeId> bucket_ids_;  // sorted for the ownership check
    std::vector<NodeRecord> fillers_;
};

}  // namespace eclipsim
