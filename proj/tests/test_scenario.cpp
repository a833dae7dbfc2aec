// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "eclipsim/scenario.hpp"

using namespace eclipsim;

TEST_SUITE_BEGIN("scenario");

TEST_CASE("churn sampler hits the measured quantiles") {
    ChurnModel churn;
    Rng rng(1001);
    const int draws = 100000;
    std::vector<double> long_component;
    int short_count = 0;
    for (int i = 0; i < draws; ++i) {
        SimTime d = churn.sample(rng);
        CHECK(d > 0);
        CHECK(d <= static_cast<SimTime>(churn.long_cap_s * 1e9));
        double secs = static_cast<double>(d) / 1e9;
        if (secs < 60.0) ++short_count;
        else long_component.push_back(secs);
    }
    double p_short = static_cast<double>(short_count) / draws;
    CHECK(std::abs(p_short - 0.9026) < 0.01);

    // Conditional 95th percentile of the >= 60 s component: 5.5 days +- 10%.
    std::sort(long_component.begin(), long_component.end());
    double p95 = long_component[static_cast<size_t>(0.95 * static_cast<double>(long_component.size()))];
    CHECK(p95 > 0.9 * 475200.0);
    CHECK(p95 < 1.1 * 475200.0);
}

TEST_CASE("churn sampler is deterministic per seed") {
    ChurnModel churn;
    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(churn.sample(a) == churn.sample(b));
}

TEST_CASE("the tail location parameter pins the 95th percentile") {
    ChurnModel churn;
    // By construction: short_max + exp(mu + z95*sigma) == long_p95.
    double q95 = churn.short_max_s + std::exp(churn.long_mu() + 1.6448536269514722 * churn.long_sigma);
    CHECK(q95 == doctest::Approx(churn.long_p95_s).epsilon(1e-9));
}

TEST_CASE("latency samples stay positive and near the configured mean") {
    LatencyModel lat;
    Rng rng(1002);
    double sum = 0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        SimTime l = lat.sample(rng);
        CHECK(l >= kNsPerMs);
        sum += static_cast<double>(l) / 1e6;
    }
    CHECK(std::abs(sum / draws - 180.0) < 3.0);
}

TEST_CASE("presets bundle the variant toggles") {
    ScenarioConfig v18 = scenario_preset("geth-1.8");
    CHECK(v18.geth_variant.max_peers == 25);
    CHECK(v18.geth_variant.read_random_mode == ReadMode::Heads);
    CHECK(!v18.geth_variant.inbound_throttle);
    CHECK(v18.restart_victim);

    ScenarioConfig v19 = scenario_preset("geth-1.9");
    CHECK(v19.geth_variant.max_peers == 50);
    CHECK(v19.geth_variant.read_random_mode == ReadMode::Uniform);
    CHECK(v19.geth_variant.inbound_throttle);

    // The table hardening is always modeled, so pre-1.8 shares the 1.8 toggles.
    ScenarioConfig pre = scenario_preset("pre-1.8");
    CHECK(pre.geth_variant.max_peers == v18.geth_variant.max_peers);
    CHECK_THROWS_AS(scenario_preset("geth-2.0"), ConfigError);
}

TEST_CASE("config json round-trips") {
    ScenarioConfig cfg = scenario_preset("geth-1.9");
    cfg.seed = 99;
    cfg.honest_count = 123;
    cfg.neighbors_limit = 12;
    cfg.restart_victim = false;
    cfg.attack->pool_size = 777;
    cfg.churn_model.long_sigma = 1.5;
    ScenarioConfig back = ScenarioConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());

    cfg.attack.reset();
    back = ScenarioConfig::from_json(cfg.to_json());
    CHECK(!back.attack.has_value());
}

TEST_CASE("validation rejects out-of-range configs") {
    ScenarioConfig cfg;
    cfg.neighbors_limit = 13;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ScenarioConfig{};
    cfg.dial_failure_prob = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ScenarioConfig{};
    cfg.duration_limit_s = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ScenarioConfig{};
    cfg.attack->pool_size = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ScenarioConfig{};
    cfg.bootstrap_count = cfg.honest_count + 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ScenarioConfig{};
    cfg.churn_model.long_cap_s = cfg.churn_model.long_p95_s / 2;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("attack start honors the warmup only without a restart") {
    ScenarioConfig cfg;
    cfg.restart_victim = true;
    CHECK(cfg.attack_start_ns() == 0);
    cfg.restart_victim = false;
    CHECK(cfg.attack_start_ns() == static_cast<SimTime>(cfg.warmup_s * 1e9));
    CHECK(cfg.end_ns() == cfg.attack_start_ns() + static_cast<SimTime>(cfg.duration_limit_s * 1e9));
}

TEST_SUITE_END();
