// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include "eclipsim/attacker.hpp"

#include <algorithm>
#include <stdexcept>

namespace eclipsim {

namespace {

// The two /24 subnets all sybil endpoints are drawn from.
constexpr uint8_t kSubnetAOctets[3] = {100, 64, 10};
constexpr uint8_t kSubnetBOctets[3] = {100, 65, 20};

IPv4 subnet_address(int subnet, int host) {
    const uint8_t* o = subnet == 0 ? kSubnetAOctets : kSubnetBOctets;
    return IPv4::from_octets(o[0], o[1], o[2], static_cast<uint8_t>(1 + host));
}

}  // namespace

AttackPlan prepare_attack(const NodeId& victim_id, size_t pool_size, Rng& rng,
                          const AttackConfig& cfg) {
    if (pool_size < 1) throw std::invalid_argument("pool_size must be >= 1");
    AttackPlan plan;
    plan.victim_id = victim_id;
    plan.ping_interval_s = cfg.ping_interval_s;
    plan.inbound_fillers = cfg.inbound_fillers;
    plan.addresses_per_subnet = cfg.addresses_per_subnet;
    plan.subnets = {subnet_of(subnet_address(0, 0)), subnet_of(subnet_address(1, 0))};

    Rng mine_rng = rng.child(0x6d696e65);  // "mine"
    auto mined = mine_bucket_set(victim_id, mine_rng);
    // Ten sybils in subnet A, seven in subnet B: the table-wide /24 limit of
    // ten makes any 17/2 split with more than ten per subnet impossible.
    int i = 0;
    for (const auto& [distance, report] : mined) {
        int subnet = i < 10 ? 0 : 1;
        int host = i < 10 ? i : i - 10;
        NodeRecord rec{report.id, subnet_address(subnet, host),
                       static_cast<uint16_t>(30400 + distance),
                       static_cast<uint16_t>(30400 + distance)};
        plan.bucket_sybils.emplace(distance, rec);
        plan.mining_attempts.emplace(distance, report.attempts);
        ++i;
    }

    Rng pool_rng = rng.child(0x706f6f6c);  // "pool"
    plan.pool = SybilPool::build(pool_size, pool_rng);
    plan.check();
    return plan;
}

void AttackPlan::check() const {
    if (bucket_sybils.size() != static_cast<size_t>(kBucketCount))
        throw std::logic_error("plan must hold one sybil per bucket");
    std::map<SubnetKey, int> subnet_use;
    for (const auto& [distance, rec] : bucket_sybils) {
        auto d = log_distance(victim_id, rec.id);
        if (!d || std::max(*d, kMinBucketDistance) != distance)
            throw std::logic_error("bucket sybil mined for the wrong distance");
        SubnetKey s = subnet_of(rec.ip);
        if (s != subnets[0] && s != subnets[1])
            throw std::logic_error("sybil endpoint outside the two subnets");
        ++subnet_use[s];
    }
    for (const auto& [s, count] : subnet_use)
        if (count > static_cast<int>(kTableSubnetLimit))
            throw std::logic_error("plan exceeds the table-wide /24 limit");
    if (pool.size() < 1) throw std::logic_error("plan has no pool");
}

Attacker::Attacker(AttackPlan plan) : plan_(std::move(plan)) {
    plan_.check();
    for (const auto& [d, rec] : plan_.bucket_sybils) bucket_ids_.push_back(rec.id);
    std::sort(bucket_ids_.begin(), bucket_ids_.end());

    // Filler identities are derived from the plan so the whole attack is a
    // pure function of (victim, seed). Ports separate fillers sharing an IP.
    Rng filler_rng(splitmix64(plan_.victim_id.words[3] ^ 0xf111e500), 7);
    for (int i = 0; i < plan_.inbound_fillers; ++i) {
        int subnet = i % 2;
        int host = (i / 2) % plan_.addresses_per_subnet;
        fillers_.push_back(NodeRecord{generate_id(filler_rng), subnet_address(subnet, host),
                                      static_cast<uint16_t>(40000 + i),
                                      static_cast<uint16_t>(40000 + i)});
    }
}

bool Attacker::owns(const NodeId& id) const {
    if (std::binary_search(bucket_ids_.begin(), bucket_ids_.end(), id)) return true;
    if (plan_.pool.contains(id)) return true;
    return std::any_of(fillers_.begin(), fillers_.end(),
                       [&](const NodeRecord& f) { return f.id == id; });
}

NodeRecord Attacker::pool_endpoint(const NodeId& id) const {
    // Host and subnet derived from the id itself: stable, and confined to the
    // two /24s. Ports disambiguate ids that share an address.
    uint64_t h = splitmix64(id.words[3] ^ id.words[0]);
    int subnet = static_cast<int>(h & 1);
    int host = static_cast<int>((h >> 1) % static_cast<uint64_t>(plan_.addresses_per_subnet));
    uint16_t port = static_cast<uint16_t>(45000 + ((h >> 16) & 0x3fff));
    return NodeRecord{id, subnet_address(subnet, host), port, port};
}

std::vector<NodeRecord> Attacker::poison_findnode(const NodeId& target, size_t limit) const {
    std::vector<NodeRecord> out;
    for (const auto& id : plan_.pool.closest(target, limit)) out.push_back(pool_endpoint(id));
    return out;
}

nlohmann::ordered_json AttackPlan::to_json(const std::string& pool_file) const {
    nlohmann::ordered_json j;
    j["victim_id"] = victim_id.to_hex();
    j["bucket_sybils"] = nlohmann::ordered_json::array();
    for (const auto& [distance, rec] : bucket_sybils) {
        auto jr = record_to_json(rec);
        jr["distance"] = distance;
        jr["mining_attempts"] = mining_attempts.count(distance) ? mining_attempts.at(distance) : 0;
        j["bucket_sybils"].push_back(std::move(jr));
    }
    j["subnets"] = {subnet_address(0, 0).to_string(), subnet_address(1, 0).to_string()};
    j["ping_interval_s"] = ping_interval_s;
    j["inbound_fillers"] = inbound_fillers;
    j["addresses_per_subnet"] = addresses_per_subnet;
    j["pool_file"] = pool_file;
    return j;
}

AttackPlan AttackPlan::from_json(const nlohmann::json& j, SybilPool pool) {
    AttackPlan plan;
    plan.victim_id = NodeId::from_hex(j.at("victim_id").get<std::string>());
    for (const auto& jr : j.at("bucket_sybils")) {
        int distance = jr.at("distance").get<int>();
        plan.bucket_sybils.emplace(distance, record_from_json(jr));
        if (jr.contains("mining_attempts"))
            plan.mining_attempts.emplace(distance, jr.at("mining_attempts").get<uint64_t>());
    }
    plan.subnets = {subnet_of(subnet_address(0, 0)), subnet_of(subnet_address(1, 0))};
    plan.ping_interval_s = j.at("ping_interval_s").get<double>();
    plan.inbound_fillers = j.at("inbound_fillers").get<int>();
    plan.addresses_per_subnet = j.at("addresses_per_subnet").get<int>();
    plan.pool = std::move(pool);
    plan.check();
    return plan;
}

}  // namespace eclipsim
