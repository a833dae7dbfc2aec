// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include <cmath>

#include "doctest.h"
#include "eclipsim/mining.hpp"

using namespace eclipsim;

TEST_SUITE_BEGIN("mining");

TEST_CASE("generation is deterministic for a fixed seed") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(generate_id(a) == generate_id(b));
    Rng c(42), d(43);
    CHECK(generate_id(c) != generate_id(d));
}

TEST_CASE("independent streams from one seed differ") {
    Rng a(7, 0), b(7, 1);
    CHECK(generate_id(a) != generate_id(b));
    Rng base(7);
    Rng c1 = base.child(1), c2 = base.child(2);
    CHECK(generate_id(c1) != generate_id(c2));
}

TEST_CASE("every bit position is set with frequency 0.5 +- 0.01 over 1e5 draws") {
    Rng rng(2026);
    const int draws = 100000;
    int counts[256] = {0};
    for (int i = 0; i < draws; ++i) {
        NodeId id = generate_id(rng);
        for (int w = 0; w < 4; ++w) {
            uint64_t v = id.words[static_cast<size_t>(w)];
            for (int b = 0; b < 64; ++b)
                counts[w * 64 + b] += static_cast<int>((v >> (63 - b)) & 1);
        }
    }
    for (int bit = 0; bit < 256; ++bit) {
        double freq = static_cast<double>(counts[bit]) / draws;
        CHECK(freq == doctest::Approx(0.5).epsilon(0.02));  // +-0.01 absolute
        CHECK(std::abs(freq - 0.5) < 0.01);
    }
}

TEST_CASE("log-distance of fresh ids from a fixed id follows 2^(d-256)") {
    Rng rng(99);
    NodeId ref = generate_id(rng);
    const int draws = 100000;
    int at_dist[256] = {0};
    for (int i = 0; i < draws; ++i) {
        auto d = log_distance(ref, generate_id(rng));
        REQUIRE(d.has_value());
        ++at_dist[*d];
    }
    // Distance 255 happens with probability 1/2.
    CHECK(std::abs(static_cast<double>(at_dist[255]) / draws - 0.5) < 0.01);
    // Check the next few distances against p = 2^(d-256) within 3 binomial
    // standard errors.
    for (int d = 252; d <= 255; ++d) {
        double p = std::ldexp(1.0, d - 256);
        double sigma = std::sqrt(p * (1 - p) / draws);
        double freq = static_cast<double>(at_dist[d]) / draws;
        CHECK(std::abs(freq - p) <= 3 * sigma);
    }
}

TEST_CASE("mined ids land at the requested distance and count attempts") {
    Rng rng(5);
    NodeId local = generate_id(rng);
    for (int d : {239, 247, 255}) {
        MiningReport r = mine_id_for_distance(local, d, rng);
        CHECK(log_distance(local, r.id) == d);
        CHECK(r.attempts >= 1);
        auto j = to_json(r);
        CHECK(j["id"] == r.id.to_hex());
        CHECK(j["attempts"] == r.attempts);
    }
    CHECK_THROWS_AS(mine_id_for_distance(local, 238, rng), std::invalid_argument);
    CHECK_THROWS_AS(mine_id_for_distance(local, 256, rng), std::invalid_argument);
}

TEST_CASE("mean attempts follow the geometric expectation 2^(256-d)") {
    Rng rng(777);
    NodeId local = generate_id(rng);
    // Distance 255: expectation 2.
    {
        const int runs = 1000;
        uint64_t total = 0;
        for (int i = 0; i < runs; ++i) total += mine_id_for_distance(local, 255, rng).attempts;
        double mean = static_cast<double>(total) / runs;
        CHECK(std::abs(mean - 2.0) / 2.0 < 0.10);
    }
    // Distances 252..254 within 10% over 1000 runs each.
    for (int d = 252; d <= 254; ++d) {
        const int runs = 1000;
        uint64_t total = 0;
        for (int i = 0; i < runs; ++i) total += mine_id_for_distance(local, d, rng).attempts;
        double mean = static_cast<double>(total) / runs;
        double expected = std::ldexp(1.0, 256 - d);
        CHECK(std::abs(mean - expected) / expected < 0.10);
    }
}

TEST_CASE("mining cap aborts pathological runs") {
    Rng rng(31337);
    NodeId local = generate_id(rng);
    // A cap factor of 0 forces the bound to a single attempt; mining distance
    // 239 then aborts essentially immediately.
    CHECK_THROWS_AS(mine_id_for_distance(local, 239, rng, 0), MiningCapExceeded);
}

TEST_CASE("bucket set covers all 17 distances with verifiable ids") {
    Rng rng(4242);
    NodeId local = generate_id(rng);
    auto set = mine_bucket_set(local, rng);
    CHECK(set.size() == 17);
    for (int d = 239; d <= 255; ++d) {
        REQUIRE(set.count(d) == 1);
        CHECK(log_distance(local, set.at(d).id) == d);
    }
}

TEST_CASE("total bucket-set cost averages near 262142 over 30 runs") {
    Rng rng(60601);
    NodeId local = generate_id(rng);
    const int runs = 30;
    uint64_t total = 0;
    for (int i = 0; i < runs; ++i) {
        auto set = mine_bucket_set(local, rng);
        for (const auto& [d, rep] : set) total += rep.attempts;
    }
    double mean = static_cast<double>(total) / runs;
    CHECK(std::abs(mean - 262142.0) / 262142.0 < 0.20);
}

TEST_SUITE_END();
