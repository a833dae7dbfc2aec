// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.
//
// Python bindings for the main operations: identity mining, pool queries,
// the closed-form analysis with its Monte Carlo validators, and scenario
// runs. Node ids cross the boundary as 64-char hex strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eclipsim/analysis.hpp"
#include "eclipsim/attacker.hpp"
#include "eclipsim/simulation.hpp"

namespace py = pybind11;
using namespace eclipsim;

namespace {

NodeId id_from_hex(const std::string& hex) { return NodeId::from_hex(hex); }

py::object py_log_distance(const std::string& a, const std::string& b) {
    auto d = log_distance(id_from_hex(a), id_from_hex(b));
    if (!d) return py::none();
    return py::int_(*d);
}

py::dict run_scenario_json(const std::string& config_json) {
    ScenarioConfig cfg = ScenarioConfig::from_json(nlohmann::json::parse(config_json));
    SimTrace trace = run_scenario(cfg);
    py::dict out;
    out["outcome"] = trace.outcome.eclipsed ? "ECLIPSED" : "TIMEOUT";
    out["eclipse_time_ns"] =
        trace.outcome.eclipsed ? py::object(py::int_(trace.outcome.eclipse_time_ns)) : py::none();
    out["attack_start_ns"] = trace.attack_start_ns;
    out["seed"] = trace.outcome.seed;
    out["trace_ndjson"] = trace.to_ndjson();
    return out;
}

}  // namespace

PYBIND11_MODULE(_eclipsim, m) {
    m.doc() = "Kademlia-style discovery eclipse-attack simulator and analysis toolkit";

    // identity and distance
    m.def("log_distance", &py_log_distance, py::arg("a"), py::arg("b"),
          "floor(log2(a xor b)) for hex ids, or None when equal");
    m.def(
        "xor_less",
        [](const std::string& a, const std::string& b, const std::string& target) {
            return xor_less(id_from_hex(a), id_from_hex(b), id_from_hex(target));
        },
        py::arg("a"), py::arg("b"), py::arg("target"));
    m.def(
        "generate_id",
        [](uint64_t seed) {
            Rng rng(seed);
            return generate_id(rng).to_hex();
        },
        py::arg("seed"));
    m.def(
        "mine_id_for_distance",
        [](const std::string& local, int d, uint64_t seed) {
            Rng rng(seed);
            MiningReport r = mine_id_for_distance(id_from_hex(local), d, rng);
            py::dict out;
            out["id"] = r.id.to_hex();
            out["attempts"] = r.attempts;
            return out;
        },
        py::arg("local"), py::arg("distance"), py::arg("seed"));
    m.def(
        "mine_bucket_set",
        [](const std::string& local, uint64_t seed) {
            Rng rng(seed);
            py::dict out;
            for (const auto& [d, r] : mine_bucket_set(id_from_hex(local), rng)) {
                py::dict e;
                e["id"] = r.id.to_hex();
                e["attempts"] = r.attempts;
                out[py::int_(d)] = e;
            }
            return out;
        },
        py::arg("local"), py::arg("seed"));

    // pre-computed pool
    py::class_<SybilPool>(m, "SybilPool")
        .def_static(
            "build",
            [](size_t n, uint64_t seed) {
                Rng rng(seed);
                return SybilPool::build(n, rng);
            },
            py::arg("n"), py::arg("seed"))
        .def_static("load", &SybilPool::load, py::arg("path"))
        .def("save", &SybilPool::save, py::arg("path"))
        .def("size", &SybilPool::size)
        .def(
            "closest",
            [](const SybilPool& pool, const std::string& target, size_t k) {
                std::vector<std::string> out;
                for (const auto& id : pool.closest(id_from_hex(target), k))
                    out.push_back(id.to_hex());
                return out;
            },
            py::arg("target"), py::arg("k"))
        .def(
            "contains",
            [](const SybilPool& pool, const std::string& id) {
                return pool.contains(id_from_hex(id));
            },
            py::arg("id"));

    // closed forms and validators
    m.def("bucket_entry_prob", &analysis::bucket_entry_prob, py::arg("i"));
    m.def("expected_keygens", &analysis::expected_keygens, py::arg("i"));
    m.def("single_order_stat_prob", &analysis::single_order_stat_prob, py::arg("l"), py::arg("n"));
    m.def("findnode_query_prob", &analysis::findnode_query_prob, py::arg("l"), py::arg("n"),
          py::arg("a"));
    m.def("min_id_single_draw_prob", &analysis::min_id_single_draw_prob, py::arg("m"));
    m.def("min_beats_network_prob", &min_beats_network_prob, py::arg("m"), py::arg("n"));
    m.def(
        "mc_validate_findnode",
        [](int l, int n, int a, uint64_t trials, uint64_t seed) {
            Rng rng(seed);
            return analysis::mc_validate_findnode(l, n, a, trials, rng);
        },
        py::arg("l"), py::arg("n"), py::arg("a"), py::arg("trials"), py::arg("seed"));
    m.def(
        "mc_findnode_combined_rank",
        [](int k, int n, int a, uint64_t trials, uint64_t seed) {
            Rng rng(seed);
            return analysis::mc_findnode_combined_rank(k, n, a, trials, rng);
        },
        py::arg("k"), py::arg("n"), py::arg("a"), py::arg("trials"), py::arg("seed"));
    m.def(
        "mc_validate_min_id",
        [](uint64_t m_, uint64_t n, uint64_t trials, uint64_t seed) {
            Rng rng(seed);
            return analysis::mc_validate_min_id(m_, n, trials, rng);
        },
        py::arg("m"), py::arg("n"), py::arg("trials"), py::arg("seed"));
    m.def(
        "mc_min_id_shared_field",
        [](uint64_t m_, uint64_t n, uint64_t trials, uint64_t seed) {
            Rng rng(seed);
            return analysis::mc_min_id_shared_field(m_, n, trials, rng);
        },
        py::arg("m"), py::arg("n"), py::arg("trials"), py::arg("seed"));

    // attack planning and scenarios
    m.def(
        "prepare_attack",
        [](const std::string& victim, size_t pool_size, uint64_t seed) {
            Rng rng(seed);
            AttackPlan plan = prepare_attack(id_from_hex(victim), pool_size, rng);
            return plan.to_json("").dump();
        },
        py::arg("victim"), py::arg("pool_size"), py::arg("seed"),
        "mines the 17 bucket ids and returns the plan as JSON (pool omitted)");
    m.def("scenario_preset",
          [](const std::string& name) { return scenario_preset(name).to_json().dump(); },
          py::arg("name"));
    m.def("run_scenario", &run_scenario_json, py::arg("config_json"),
          "runs one scenario and returns outcome fields plus the NDJSON trace");
}
