// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include "eclipsim/table.hpp"

#include <algorithm>
#include <stdexcept>

namespace eclipsim {

DiscoveryTable::DiscoveryTable(const NodeId& local) : local_(local) {
    for (int i = 0; i < kBucketCount; ++i)
        buckets_[static_cast<size_t>(i)].distance = kMinBucketDistance + i;
}

int DiscoveryTable::bucket_index_for(const NodeId& id) const {
    auto dist = log_distance(local_, id);
    if (!dist) throw std::invalid_argument("local id has no bucket");
    return std::max(*dist, kMinBucketDistance) - kMinBucketDistance;
}

const Bucket& DiscoveryTable::bucket_for(const NodeId& id) const {
    return buckets_[static_cast<size_t>(bucket_index_for(id))];
}

const Bucket& DiscoveryTable::bucket_at_distance(int distance) const {
    if (distance < kMinBucketDistance || distance > kMaxBucketDistance)
        throw std::invalid_argument("bucket distance out of range");
    return buckets_[static_cast<size_t>(distance - kMinBucketDistance)];
}

bool DiscoveryTable::subnet_ok(const Bucket& b, SubnetKey subnet) const {
    size_t in_bucket = 0;
    for (const auto& e : b.entries)
        if (subnet_of(e.ip) == subnet) ++in_bucket;
    if (in_bucket >= kBucketSubnetLimit) return false;
    return table_subnet_count(subnet) < kTableSubnetLimit;
}

size_t DiscoveryTable::table_subnet_count(SubnetKey subnet) const {
    auto it = subnet_counts_.find(subnet);
    return it == subnet_counts_.end() ? 0 : it->second;
}

void DiscoveryTable::on_entry_added(const NodeRecord& rec) {
    ++subnet_counts_[subnet_of(rec.ip)];
    ++entry_count_;
}

void DiscoveryTable::on_entry_removed(const NodeRecord& rec) {
    auto it = subnet_counts_.find(subnet_of(rec.ip));
    if (it != subnet_counts_.end() && --it->second == 0) subnet_counts_.erase(it);
    --entry_count_;
}

AddOutcome DiscoveryTable::add_seen(const NodeRecord& rec) {
    if (rec.id == local_) throw std::invalid_argument("cannot add local id to own table");
    Bucket& b = buckets_[static_cast<size_t>(bucket_index_for(rec.id))];

    auto in_bucket = std::find_if(b.entries.begin(), b.entries.end(),
                                  [&](const NodeRecord& e) { return e.id == rec.id; });
    if (in_bucket != b.entries.end()) {
        NodeRecord moved = *in_bucket;
        b.entries.erase(in_bucket);
        b.entries.push_front(moved);
        return AddOutcome::Bumped;
    }

    if (b.entries.size() < kBucketSize) {
        if (!subnet_ok(b, subnet_of(rec.ip))) return AddOutcome::RejectedSubnet;
        b.entries.push_front(rec);
        on_entry_added(rec);
        return AddOutcome::Added;
    }

    auto in_repl = std::find_if(b.replacements.begin(), b.replacements.end(),
                                [&](const NodeRecord& e) { return e.id == rec.id; });
    if (in_repl != b.replacements.end()) return AddOutcome::Noop;

    // The /24 restriction gates the replacement list as well.
    if (!subnet_ok(b, subnet_of(rec.ip))) return AddOutcome::RejectedSubnet;
    if (b.replacements.size() >= kReplacementSize) b.replacements.pop_front();
    b.replacements.push_back(rec);
    return AddOutcome::ReplacementAdded;
}

RevalidationOutcome DiscoveryTable::revalidate_step(
    Rng& rng, const std::function<bool(const NodeRecord&)>& liveness) {
    RevalidationOutcome out;
    std::vector<size_t> nonempty;
    for (size_t i = 0; i < buckets_.size(); ++i)
        if (!buckets_[i].entries.empty()) nonempty.push_back(i);
    if (nonempty.empty()) return out;

    Bucket& b = buckets_[nonempty[rng.bounded(nonempty.size())]];
    out.probed = true;
    out.bucket_distance = b.distance;
    out.probed_record = b.entries.back();
    out.alive = liveness(out.probed_record);

    if (out.alive) {
        NodeRecord moved = b.entries.back();
        b.entries.pop_back();
        b.entries.push_front(moved);
        return out;
    }

    b.entries.pop_back();
    on_entry_removed(out.probed_record);

    // Promote a random replacement whose subnet still fits now that the dead
    // entry is gone; ineligible candidates stay in the list.
    std::vector<size_t> eligible;
    for (size_t i = 0; i < b.replacements.size(); ++i)
        if (subnet_ok(b, subnet_of(b.replacements[i].ip))) eligible.push_back(i);
    if (!eligible.empty()) {
        size_t pick = eligible[rng.bounded(eligible.size())];
        NodeRecord promoted = b.replacements[pick];
        b.replacements.erase(b.replacements.begin() + static_cast<ptrdiff_t>(pick));
        b.entries.push_back(promoted);  // no activity history: least recently active
        on_entry_added(promoted);
        out.promoted = promoted;
    }
    return out;
}

std::vector<NodeRecord> DiscoveryTable::read_random_nodes(size_t max, Rng& rng,
                                                          ReadMode mode) const {
    std::vector<NodeRecord> out;
    if (max == 0) return out;
    if (mode == ReadMode::Heads) {
        std::vector<size_t> nonempty;
        for (size_t i = 0; i < buckets_.size(); ++i)
            if (!buckets_[i].entries.empty()) nonempty.push_back(i);
        size_t take = std::min(max, nonempty.size());
        // Partial Fisher-Yates: distinct buckets, uniform order.
        for (size_t i = 0; i < take; ++i) {
            size_t j = i + rng.bounded(nonempty.size() - i);
            std::swap(nonempty[i], nonempty[j]);
            out.push_back(buckets_[nonempty[i]].entries.front());
        }
    } else {
        std::vector<const NodeRecord*> all;
        all.reserve(entry_count_);
        for (const auto& b : buckets_)
            for (const auto& e : b.entries) all.push_back(&e);
        size_t take = std::min(max, all.size());
        for (size_t i = 0; i < take; ++i) {
            size_t j = i + rng.bounded(all.size() - i);
            std::swap(all[i], all[j]);
            out.push_back(*all[i]);
        }
    }
    return out;
}

std::vector<NodeRecord> DiscoveryTable::closest_known(const NodeId& target, size_t k) const {
    std::vector<NodeRecord> all;
    all.reserve(entry_count_);
    for (const auto& b : buckets_)
        for (const auto& e : b.entries) all.push_back(e);
    std::sort(all.begin(), all.end(), [&](const NodeRecord& a, const NodeRecord& c) {
        return xor_less(a.id, c.id, target);
    });
    if (all.size() > k) all.resize(k);
    return all;
}

bool DiscoveryTable::contains(const NodeId& id) const {
    if (id == local_) return false;
    const Bucket& b = bucket_for(id);
    return std::any_of(b.entries.begin(), b.entries.end(),
                       [&](const NodeRecord& e) { return e.id == id; });
}

size_t DiscoveryTable::nonempty_bucket_count() const {
    size_t n = 0;
    for (const auto& b : buckets_)
        if (!b.entries.empty()) ++n;
    return n;
}

void DiscoveryTable::audit() const {
    std::map<SubnetKey, size_t> recount;
    size_t entries_seen = 0;
    for (const auto& b : buckets_) {
        if (b.entries.size() > kBucketSize) throw std::logic_error("bucket over capacity");
        if (b.replacements.size() > kReplacementSize)
            throw std::logic_error("replacement list over capacity");
        std::map<SubnetKey, size_t> per_bucket;
        for (const auto& e : b.entries) {
            if (e.id == local_) throw std::logic_error("local id stored in own table");
            auto dist = log_distance(local_, e.id);
            int clamped = std::max(*dist, kMinBucketDistance);
            if (clamped != b.distance) throw std::logic_error("entry in wrong bucket");
            if (++per_bucket[subnet_of(e.ip)] > kBucketSubnetLimit)
                throw std::logic_error("per-bucket subnet limit violated");
            ++recount[subnet_of(e.ip)];
            ++entries_seen;
            for (const auto& r : b.replacements)
                if (r.id == e.id)
                    throw std::logic_error("record in both entries and replacements");
        }
    }
    for (const auto& [subnet, count] : recount)
        if (count > kTableSubnetLimit) throw std::logic_error("table-wide subnet limit violated");
    if (recount != subnet_counts_) throw std::logic_error("subnet counters out of sync");
    if (entries_seen != entry_count_) throw std::logic_error("entry count out of sync");
}

nlohmann::ordered_json record_to_json(const NodeRecord& rec) {
    return {{"id", rec.id.to_hex()},
            {"ip", rec.ip.to_string()},
            {"udp_port", rec.udp_port},
            {"tcp_port", rec.tcp_port}};
}

NodeRecord record_from_json(const nlohmann::json& j) {
    NodeRecord rec;
    rec.id = NodeId::from_hex(j.at("id").get<std::string>());
    rec.ip = IPv4::from_string(j.at("ip").get<std::string>());
    rec.udp_port = j.at("udp_port").get<uint16_t>();
    rec.tcp_port = j.at("tcp_port").get<uint16_t>();
    return rec;
}

nlohmann::ordered_json DiscoveryTable::snapshot() const {
    nlohmann::ordered_json out;
    out["local_id"] = local_.to_hex();
    out["buckets"] = nlohmann::ordered_json::array();
    for (const auto& b : buckets_) {
        nlohmann::ordered_json jb;
        jb["distance"] = b.distance;
        jb["entries"] = nlohmann::ordered_json::array();
        for (const auto& e : b.entries) jb["entries"].push_back(record_to_json(e));
        jb["replacements"] = nlohmann::ordered_json::array();
        for (const auto& r : b.replacements) jb["replacements"].push_back(record_to_json(r));
        out["buckets"].push_back(std::move(jb));
    }
    return out;
}

}  // namespace eclipsim
