# Copyright (c) 2026 The eclipsim developers
# Distributed under the MIT software license, see the accompanying file LICENSE.

import json

import _eclipsim as ec


VICTIM = "e" * 64


def test_log_distance_basics():
    a = "8" + "0" * 63
    b = "0" * 64
    assert ec.log_distance(a, b) == 255
    assert ec.log_distance(a, a) is None
    assert ec.xor_less(b, a, b)


def test_generation_is_seed_deterministic():
    assert ec.generate_id(7) == ec.generate_id(7)
    assert ec.generate_id(7) != ec.generate_id(8)


def test_mining_hits_the_requested_bucket():
    report = ec.mine_id_for_distance(VICTIM, 252, seed=3)
    assert ec.log_distance(VICTIM, report["id"]) == 252
    assert report["attempts"] >= 1

    buckets = ec.mine_bucket_set(VICTIM, seed=3)
    assert sorted(buckets.keys()) == list(range(239, 256))


def test_expected_keygens_total():
    assert sum(ec.expected_keygens(i) for i in range(239, 256)) == 262142
    assert ec.bucket_entry_prob(255) == 0.5


def test_formulas_match_their_validators_roughly():
    cf = ec.findnode_query_prob(17, 32, 4)
    mc = ec.mc_validate_findnode(17, 32, 4, trials=20000, seed=5)
    assert abs(cf - mc) < 0.02

    cf = ec.min_beats_network_prob(100, 10)
    mc = ec.mc_validate_min_id(100, 10, trials=20000, seed=5)
    assert abs(cf - mc) < 0.02


def test_pool_closest_is_sorted_and_deterministic():
    pool = ec.SybilPool.build(2000, seed=9)
    assert pool.size() == 2000
    target = ec.generate_id(10)
    got = pool.closest(target, 5)
    assert len(got) == 5
    assert all(pool.contains(h) for h in got)
    assert all(ec.xor_less(got[i], got[i + 1], target) for i in range(4))


def test_prepare_attack_plan_shape():
    plan = json.loads(ec.prepare_attack(VICTIM, pool_size=500, seed=4))
    assert len(plan["bucket_sybils"]) == 17
    assert len(plan["subnets"]) == 2


def test_scenario_roundtrip_and_determinism():
    cfg = json.loads(ec.scenario_preset("geth-1.8"))
    cfg["honest_count"] = 60
    cfg["duration_limit_s"] = 600.0
    cfg["attack"]["pool_size"] = 2000
    cfg["seed"] = 12
    first = ec.run_scenario(json.dumps(cfg))
    second = ec.run_scenario(json.dumps(cfg))
    assert first["trace_ndjson"] == second["trace_ndjson"]
    assert first["outcome"] in ("ECLIPSED", "TIMEOUT")
    last_line = json.loads(first["trace_ndjson"].strip().splitlines()[-1])
    assert last_line["seed"] == 12
