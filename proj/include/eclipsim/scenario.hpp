// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "eclipsim/peer_manager.hpp"
#include "eclipsim/rng.hpp"

#include "json.hpp"

namespace eclipsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two-component connection-lifetime mixture observed on the live network:
/// most connections die within a minute, the rest follow a heavy log-normal
/// tail pinned at its 95th percentile.
struct ChurnModel {
    double p_short = 0.9026;        // fraction of connections shorter than short_max_s
    double short_max_s = 60.0;      // short component: uniform on (0, short_max_s]
    double long_p95_s = 475200.0;   // 5.5 days; 95th percentile of the long component
    double long_sigma = 2.0;        // log-normal shape of the tail
    double long_cap_s = 2592000.0;  // 30-day cap; the measured trace cannot support longer

    /// Location parameter so that short_max_s + exp(mu + 1.6449*sigma) hits
    /// the pinned 95th percentile.
    double long_mu() const;

    SimTime sample(Rng& rng) const;  // strictly positive duration in ns
};

/// Per-message one-way latency: normal(mean, jitter) truncated at 1 ms. The
/// defaults reproduce the measured profile (about 180 ms on average, roughly
/// a tenth of peers above 276 ms), which makes a two-leg probe overshoot the
/// 500 ms liveness timeout around 11% of the time.
struct LatencyModel {
    double mean_ms = 180.0;
    double jitter_ms = 80.0;

    SimTime sample(Rng& rng) const;
};

struct GethVariant {
    int max_peers = 25;
    ReadMode read_random_mode = ReadMode::Heads;
    bool inbound_throttle = false;
    double throttle_window_s = 30.0;

    static GethVariant v1_8();
    static GethVariant v1_9();
};

struct AttackConfig {
    size_t pool_size = 100000;
    double ping_interval_s = 3.0;     // keep-alive cadence per bucket sybil
    int inbound_fillers = 40;         // connecting endpoints for the inbound flood
    int addresses_per_subnet = 16;    // distinct host addresses used inside each /24
};

struct ScenarioConfig {
    uint64_t seed = 1;
    int honest_count = 500;
    GethVariant geth_variant = GethVariant::v1_8();
    size_t neighbors_limit = 16;  // records per FindNode response, 12 or 16
    ChurnModel churn_model;
    LatencyModel latency_model;
    bool restart_victim = true;
    std::optional<AttackConfig> attack = AttackConfig{};
    double duration_limit_s = 86400.0;  // simulated cutoff, counted from the attack start
    double dial_failure_prob = 0.5;     // dials to honest records that go nowhere

    // Artifact knobs beyond the core set, all defaulted.
    int bootstrap_count = 16;       // honest records seeding the victim's table
    double warmup_s = 259200.0;     // pre-attack victim lifetime when not restarting (72 h)
    double connect_timeout_s = 10.0;
    double udp_timeout_ms = 500.0;  // liveness-probe round-trip budget
    // Ambient discovery traffic: every honest node that has the victim in its
    // table revalidates it now and then, which keeps honest records flowing
    // into the victim's buckets. Mean interval per knowing node.
    double honest_ping_interval_s = 1000.0;
    double refresh_interval_s = 1800.0;  // victim table refresh (one self + 3 random lookups)
    bool full_trace = false;             // also record per-message and table events

    SimTime attack_start_ns() const {
        return restart_victim ? 0 : static_cast<SimTime>(warmup_s * 1e9);
    }
    SimTime end_ns() const {
        return attack_start_ns() + static_cast<SimTime>(duration_limit_s * 1e9);
    }

    void validate() const;  // throws ConfigError

    nlohmann::ordered_json to_json() const;
    static ScenarioConfig from_json(const nlohmann::json& j);
};

/// Bundled toggle combinations: "geth-1.8" (25 peers, bucket-head reads, no
/// throttle; also aliased as "pre-1.8" since the discovery-table hardening is
/// always modeled) and "geth-1.9" (50 peers, uniform reads, 30 s throttle).
ScenarioConfig scenario_preset(const std::string& name);

/// Loads a preset name or a JSON file path.
ScenarioConfig load_scenario(const std::string& name_or_path);

}  // namespace eclipsim
