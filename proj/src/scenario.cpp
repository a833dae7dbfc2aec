// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include "eclipsim/scenario.hpp"

#include <cmath>
#include <fstream>

namespace eclipsim {

namespace {
constexpr double kZ95 = 1.6448536269514722;  // standard normal 95% quantile
}

double ChurnModel::long_mu() const {
    return std::log(long_p95_s - short_max_s) - kZ95 * long_sigma;
}

SimTime ChurnModel::sample(Rng& rng) const {
    if (rng.next_double() < p_short) {
        // Uniform on (0, short_max_s]: never zero.
        double u = 1.0 - rng.next_double();
        return std::max<SimTime>(1, static_cast<SimTime>(u * short_max_s * 1e9));
    }
    double tail = std::exp(rng.normal(long_mu(), long_sigma));
    double capped = std::min(short_max_s + tail, long_cap_s);
    return static_cast<SimTime>(capped * 1e9);
}

SimTime LatencyModel::sample(Rng& rng) const {
    double ms = rng.normal(mean_ms, jitter_ms);
    if (ms < 1.0) ms = 1.0;
    return static_cast<SimTime>(ms * 1e6);
}

GethVariant GethVariant::v1_8() { return GethVariant{25, ReadMode::Heads, false, 30.0}; }
GethVariant GethVariant::v1_9() { return GethVariant{50, ReadMode::Uniform, true, 30.0}; }

void ScenarioConfig::validate() const {
    if (honest_count < 0) throw ConfigError("honest_count must be >= 0");
    if (neighbors_limit != 12 && neighbors_limit != 16)
        throw ConfigError("neighbors_limit must be 12 or 16");
    if (duration_limit_s <= 0) throw ConfigError("duration_limit_s must be > 0");
    if (dial_failure_prob < 0 || dial_failure_prob > 1)
        throw ConfigError("dial_failure_prob must be in [0, 1]");
    if (churn_model.p_short < 0 || churn_model.p_short > 1)
        throw ConfigError("churn p_short must be in [0, 1]");
    if (churn_model.short_max_s <= 0 || churn_model.long_p95_s <= churn_model.short_max_s)
        throw ConfigError("churn quantiles out of order");
    if (churn_model.long_sigma <= 0) throw ConfigError("churn long_sigma must be > 0");
    if (churn_model.long_cap_s <= churn_model.long_p95_s)
        throw ConfigError("churn long_cap_s must exceed long_p95_s");
    if (latency_model.mean_ms <= 0 || latency_model.jitter_ms < 0)
        throw ConfigError("latency model out of range");
    if (geth_variant.max_peers < 3) throw ConfigError("max_peers must be >= 3");
    if (bootstrap_count < 0 || bootstrap_count > honest_count)
        throw ConfigError("bootstrap_count must be in [0, honest_count]");
    if (warmup_s < 0 || connect_timeout_s <= 0 || udp_timeout_ms <= 0 ||
        honest_ping_interval_s <= 0 || refresh_interval_s <= 0)
        throw ConfigError("time parameters must be positive");
    if (attack) {
        if (attack->pool_size < 1) throw ConfigError("attack pool_size must be >= 1");
        if (attack->ping_interval_s <= 0) throw ConfigError("attack ping_interval_s must be > 0");
        if (attack->inbound_fillers < 0) throw ConfigError("attack inbound_fillers must be >= 0");
        if (attack->addresses_per_subnet < 1 || attack->addresses_per_subnet > 250)
            throw ConfigError("attack addresses_per_subnet must be in [1, 250]");
    }
}

nlohmann::ordered_json ScenarioConfig::to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["honest_count"] = honest_count;
    j["geth_variant"] = geth_variant.max_peers == 25 && !geth_variant.inbound_throttle &&
                                geth_variant.read_random_mode == ReadMode::Heads
                            ? "v1.8"
                            : "v1.9";
    j["max_peers"] = geth_variant.max_peers;
    j["read_random_mode"] = geth_variant.read_random_mode == ReadMode::Heads ? "heads" : "uniform";
    j["inbound_throttle"] = geth_variant.inbound_throttle;
    j["throttle_window_s"] = geth_variant.throttle_window_s;
    j["neighbors_limit"] = neighbors_limit;
    j["churn_model"] = {{"p_short", churn_model.p_short},
                        {"short_max_s", churn_model.short_max_s},
                        {"long_p95_s", churn_model.long_p95_s},
                        {"long_sigma", churn_model.long_sigma},
                        {"long_cap_s", churn_model.long_cap_s}};
    j["latency_model"] = {{"mean_ms", latency_model.mean_ms},
                          {"jitter_ms", latency_model.jitter_ms}};
    j["restart_victim"] = restart_victim;
    if (attack) {
        j["attack"] = {{"pool_size", attack->pool_size},
                       {"ping_interval_s", attack->ping_interval_s},
                       {"inbound_fillers", attack->inbound_fillers},
                       {"addresses_per_subnet", attack->addresses_per_subnet}};
    } else {
        j["attack"] = nullptr;
    }
    j["duration_limit_s"] = duration_limit_s;
    j["dial_failure_prob"] = dial_failure_prob;
    j["bootstrap_count"] = bootstrap_count;
    j["warmup_s"] = warmup_s;
    j["connect_timeout_s"] = connect_timeout_s;
    j["udp_timeout_ms"] = udp_timeout_ms;
    j["honest_ping_interval_s"] = honest_ping_interval_s;
    j["refresh_interval_s"] = refresh_interval_s;
    j["full_trace"] = full_trace;
    return j;
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
    ScenarioConfig cfg;
    try {
        if (j.contains("geth_variant")) {
            std::string v = j.at("geth_variant").get<std::string>();
            if (v == "v1.8") cfg.geth_variant = GethVariant::v1_8();
            else if (v == "v1.9") cfg.geth_variant = GethVariant::v1_9();
            else throw ConfigError("unknown geth_variant: " + v);
        }
        if (j.contains("max_peers")) cfg.geth_variant.max_peers = j.at("max_peers").get<int>();
        if (j.contains("read_random_mode")) {
            std::string m = j.at("read_random_mode").get<std::string>();
            if (m == "heads") cfg.geth_variant.read_random_mode = ReadMode::Heads;
            else if (m == "uniform") cfg.geth_variant.read_random_mode = ReadMode::Uniform;
            else throw ConfigError("unknown read_random_mode: " + m);
        }
        if (j.contains("inbound_throttle"))
            cfg.geth_variant.inbound_throttle = j.at("inbound_throttle").get<bool>();
        if (j.contains("throttle_window_s"))
            cfg.geth_variant.throttle_window_s = j.at("throttle_window_s").get<double>();

        if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
        if (j.contains("honest_count")) cfg.honest_count = j.at("honest_count").get<int>();
        if (j.contains("neighbors_limit"))
            cfg.neighbors_limit = j.at("neighbors_limit").get<size_t>();
        if (j.contains("churn_model")) {
            const auto& c = j.at("churn_model");
            if (c.contains("p_short")) cfg.churn_model.p_short = c.at("p_short").get<double>();
            if (c.contains("short_max_s"))
                cfg.churn_model.short_max_s = c.at("short_max_s").get<double>();
            if (c.contains("long_p95_s"))
                cfg.churn_model.long_p95_s = c.at("long_p95_s").get<double>();
            if (c.contains("long_sigma"))
                cfg.churn_model.long_sigma = c.at("long_sigma").get<double>();
            if (c.contains("long_cap_s"))
                cfg.churn_model.long_cap_s = c.at("long_cap_s").get<double>();
        }
        if (j.contains("latency_model")) {
            const auto& l = j.at("latency_model");
            if (l.contains("mean_ms")) cfg.latency_model.mean_ms = l.at("mean_ms").get<double>();
            if (l.contains("jitter_ms"))
                cfg.latency_model.jitter_ms = l.at("jitter_ms").get<double>();
        }
        if (j.contains("restart_victim")) cfg.restart_victim = j.at("restart_victim").get<bool>();
        if (j.contains("attack")) {
            if (j.at("attack").is_null()) {
                cfg.attack.reset();
            } else {
                AttackConfig a;
                const auto& ja = j.at("attack");
                if (ja.contains("pool_size")) a.pool_size = ja.at("pool_size").get<size_t>();
                if (ja.contains("ping_interval_s"))
                    a.ping_interval_s = ja.at("ping_interval_s").get<double>();
                if (ja.contains("inbound_fillers"))
                    a.inbound_fillers = ja.at("inbound_fillers").get<int>();
                if (ja.contains("addresses_per_subnet"))
                    a.addresses_per_subnet = ja.at("addresses_per_subnet").get<int>();
                cfg.attack = a;
            }
        }
        if (j.contains("duration_limit_s"))
            cfg.duration_limit_s = j.at("duration_limit_s").get<double>();
        if (j.contains("dial_failure_prob"))
            cfg.dial_failure_prob = j.at("dial_failure_prob").get<double>();
        if (j.contains("bootstrap_count")) cfg.bootstrap_count = j.at("bootstrap_count").get<int>();
        if (j.contains("warmup_s")) cfg.warmup_s = j.at("warmup_s").get<double>();
        if (j.contains("connect_timeout_s"))
            cfg.connect_timeout_s = j.at("connect_timeout_s").get<double>();
        if (j.contains("udp_timeout_ms")) cfg.udp_timeout_ms = j.at("udp_timeout_ms").get<double>();
        if (j.contains("honest_ping_interval_s"))
            cfg.honest_ping_interval_s = j.at("honest_ping_interval_s").get<double>();
        if (j.contains("refresh_interval_s"))
            cfg.refresh_interval_s = j.at("refresh_interval_s").get<double>();
        if (j.contains("full_trace")) cfg.full_trace = j.at("full_trace").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad scenario json: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig scenario_preset(const std::string& name) {
    ScenarioConfig cfg;
    if (name == "geth-1.8" || name == "pre-1.8") {
        cfg.geth_variant = GethVariant::v1_8();
    } else if (name == "geth-1.9") {
        cfg.geth_variant = GethVariant::v1_9();
    } else {
        throw ConfigError("unknown preset: " + name +
                          " (expected pre-1.8, geth-1.8 or geth-1.9)");
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::string& name_or_path) {
    if (name_or_path == "pre-1.8" || name_or_path == "geth-1.8" || name_or_path == "geth-1.9")
        return scenario_preset(name_or_path);
    std::ifstream f(name_or_path);
    if (!f) throw ConfigError("cannot open scenario file: " + name_or_path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad scenario json: ") + e.what());
    }
    return ScenarioConfig::from_json(j);
}

}  // namespace eclipsim
