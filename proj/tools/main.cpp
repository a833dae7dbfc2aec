// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.
//
// eclipsim command line: mine attack plans, sweep the closed-form analysis
// against Monte Carlo, and run batches of eclipse-attack scenarios.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eclipsim/analysis.hpp"
#include "eclipsim/attacker.hpp"
#include "eclipsim/simulation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace eclipsim;

namespace {

int fail(const std::string& message) {
    ordered_json err;
    err["error"] = message;
    std::cerr << err.dump() << "\n";
    return 1;
}

std::string csv_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

struct CsvRow {
    std::string formula;
    std::string params;
    std::string closed_form;
    std::string monte_carlo;
    uint64_t trials = 0;
    std::string abs_error;
};

void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
    os << "formula,params,closed_form,monte_carlo,trials,abs_error\n";
    for (const auto& r : rows) {
        os << r.formula << ',' << r.params << ',' << r.closed_form << ',' << r.monte_carlo << ','
           << (r.trials ? std::to_string(r.trials) : "") << ',' << r.abs_error << "\n";
    }
}

int cmd_mine(const std::string& victim_hex, const std::string& out_dir, size_t pool_size,
             uint64_t seed) {
    NodeId victim = NodeId::from_hex(victim_hex);
    fs::create_directories(out_dir);

    Rng rng(seed);
    AttackConfig cfg;
    cfg.pool_size = pool_size;
    AttackPlan plan = prepare_attack(victim, pool_size, rng, cfg);

    std::string pool_file = (fs::path(out_dir) / "pool.spool").string();
    plan.pool.save(pool_file);
    std::ofstream pf(fs::path(out_dir) / "plan.json");
    pf << plan.to_json("pool.spool").dump(2) << "\n";
    if (!pf) return fail("cannot write plan.json");

    uint64_t total = 0;
    std::cout << "distance  attempts  id\n";
    for (const auto& [distance, rec] : plan.bucket_sybils) {
        uint64_t attempts = plan.mining_attempts.at(distance);
        total += attempts;
        std::cout << distance << "       " << attempts << "  " << rec.id.to_hex() << "\n";
    }
    std::cout << "total generations: " << total << " (expectation 262142)\n";
    std::cout << "pool: " << pool_size << " ids -> " << pool_file << "\n";
    return 0;
}

void fig5_rows(std::vector<CsvRow>& rows, uint64_t trials, Rng& rng) {
    for (int N : {32, 136, 272}) {
        for (int a = 1; a <= 20; ++a) {
            CsvRow r;
            r.formula = "findnode_query_prob";
            r.params = "l=17;N=" + std::to_string(N) + ";a=" + std::to_string(a);
            double cf = analysis::findnode_query_prob(17, N, a);
            double mc = analysis::mc_validate_findnode(17, N, a, trials, rng);
            r.closed_form = csv_double(cf);
            r.monte_carlo = csv_double(mc);
            r.trials = trials;
            r.abs_error = csv_double(std::abs(cf - mc));
            rows.push_back(std::move(r));
        }
    }
    // The exact combined-ranking rate alongside the threshold form, so the
    // overcount introduced by the fixed l = 17 cutoff is visible per cell.
    for (int N : {32, 136, 272}) {
        for (int a = 1; a <= 8; ++a) {
            CsvRow r;
            r.formula = "findnode_combined_rank";
            r.params = "k=16;N=" + std::to_string(N) + ";a=" + std::to_string(a);
            double cf = analysis::findnode_query_prob(17, N, a);
            double mc = analysis::mc_findnode_combined_rank(16, N, a, trials, rng);
            r.closed_form = csv_double(cf);
            r.monte_carlo = csv_double(mc);
            r.trials = trials;
            r.abs_error = csv_double(std::abs(cf - mc));
            rows.push_back(std::move(r));
        }
    }
}

void fig7_rows(std::vector<CsvRow>& rows) {
    const uint64_t ns[] = {10000,   20000,   50000,   100000,  200000,
                           500000,  1000000, 2000000, 5000000, 10000000};
    for (uint64_t m : {uint64_t{9000}, uint64_t{25000}, uint64_t{500000}}) {
        for (uint64_t n : ns) {
            CsvRow r;
            r.formula = "min_beats_network_prob";
            r.params = "m=" + std::to_string(m) + ";n=" + std::to_string(n);
            r.closed_form = csv_double(min_beats_network_prob(m, n));
            rows.push_back(std::move(r));
        }
    }
}

void minid_rows(std::vector<CsvRow>& rows, uint64_t trials, Rng& rng) {
    for (uint64_t m : {uint64_t{10}, uint64_t{100}, uint64_t{1000}}) {
        for (uint64_t n : {uint64_t{1}, uint64_t{10}, uint64_t{100}}) {
            {
                CsvRow r;
                r.formula = "min_beats_network_prob";
                r.params = "m=" + std::to_string(m) + ";n=" + std::to_string(n);
                double cf = min_beats_network_prob(m, n);
                double mc = analysis::mc_validate_min_id(m, n, trials, rng);
                r.closed_form = csv_double(cf);
                r.monte_carlo = csv_double(mc);
                r.trials = trials;
                r.abs_error = csv_double(std::abs(cf - mc));
                rows.push_back(std::move(r));
            }
            {
                // Literal single-lookup race against one shared honest field:
                // exactly n/(m+n), not the compounded closed form.
                CsvRow r;
                r.formula = "min_id_shared_field";
                r.params = "m=" + std::to_string(m) + ";n=" + std::to_string(n);
                double cf = static_cast<double>(n) / static_cast<double>(m + n);
                double mc = analysis::mc_min_id_shared_field(m, n, trials, rng);
                r.closed_form = csv_double(cf);
                r.monte_carlo = csv_double(mc);
                r.trials = trials;
                r.abs_error = csv_double(std::abs(cf - mc));
                rows.push_back(std::move(r));
            }
        }
    }
}

int cmd_analyze(const std::string& grid, uint64_t trials, uint64_t seed, const std::string& out) {
    std::vector<CsvRow> rows;
    Rng rng(seed);
    if (grid == "fig5" || grid == "all") fig5_rows(rows, trials, rng);
    if (grid == "fig7" || grid == "all") fig7_rows(rows);
    if (grid == "minid" || grid == "all") minid_rows(rows, trials, rng);
    if (grid != "fig5" && grid != "fig7" && grid != "minid" && grid != "all" && grid != "none")
        return fail("unknown grid: " + grid + " (expected fig5, fig7, minid, all or none)");

    if (out.empty()) {
        write_csv(std::cout, rows);
    } else {
        std::ofstream f(out);
        write_csv(f, rows);
        if (!f) return fail("cannot write " + out);
        std::cout << rows.size() << " rows -> " << out << "\n";
    }
    return 0;
}

int64_t quantile_ns(std::vector<int64_t> sorted, double p) {
    if (sorted.empty()) return 0;
    double h = static_cast<double>(sorted.size() - 1) * p;
    size_t lo = static_cast<size_t>(h);
    size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = h - static_cast<double>(lo);
    return static_cast<int64_t>(static_cast<double>(sorted[lo]) +
                                frac * static_cast<double>(sorted[hi] - sorted[lo]));
}

int cmd_simulate(ScenarioConfig base, const std::vector<uint64_t>& seeds,
                 const std::string& out_dir) {
    if (seeds.empty()) return fail("no seeds given");
    std::set<uint64_t> distinct(seeds.begin(), seeds.end());
    if (distinct.size() != seeds.size()) return fail("seeds must be distinct");
    if (!out_dir.empty()) fs::create_directories(out_dir);

    ordered_json summary;
    summary["scenario"] = base.to_json();
    summary["runs"] = ordered_json::array();
    std::vector<int64_t> eclipse_after_attack;
    int failures = 0;

    for (uint64_t seed : seeds) {
        ScenarioConfig cfg = base;
        cfg.seed = seed;
        ordered_json run;
        run["seed"] = seed;
        try {
            SimTrace trace = run_scenario(cfg);
            if (!out_dir.empty()) {
                std::ofstream tf(fs::path(out_dir) / ("trace-" + std::to_string(seed) + ".ndjson"));
                trace.write_ndjson(tf);
            }
            run["outcome"] = trace.outcome.eclipsed ? "ECLIPSED" : "TIMEOUT";
            if (trace.outcome.eclipsed) {
                run["eclipse_time_ns"] = trace.outcome.eclipse_time_ns;
                run["attack_start_ns"] = trace.attack_start_ns;
                run["eclipse_after_attack_ns"] =
                    trace.outcome.eclipse_time_ns - trace.attack_start_ns;
                eclipse_after_attack.push_back(trace.outcome.eclipse_time_ns -
                                               trace.attack_start_ns);
            } else {
                run["eclipse_time_ns"] = nullptr;
            }
        } catch (const std::exception& e) {
            run["outcome"] = "ERROR";
            run["error"] = e.what();
            ++failures;  // isolate per-seed failures, keep the batch going
        }
        summary["runs"].push_back(std::move(run));
    }

    std::sort(eclipse_after_attack.begin(), eclipse_after_attack.end());
    summary["success_count"] = eclipse_after_attack.size();
    summary["run_count"] = seeds.size();
    if (!eclipse_after_attack.empty()) {
        summary["eclipse_after_attack_quartiles_ns"] = {
            {"q1", quantile_ns(eclipse_after_attack, 0.25)},
            {"median", quantile_ns(eclipse_after_attack, 0.5)},
            {"q3", quantile_ns(eclipse_after_attack, 0.75)}};
    } else {
        summary["eclipse_after_attack_quartiles_ns"] = nullptr;
    }

    if (!out_dir.empty()) {
        std::ofstream sf(fs::path(out_dir) / "summary.json");
        sf << summary.dump(2) << "\n";
        if (!sf) return fail("cannot write summary.json");
    }
    std::cout << summary.dump(2) << "\n";
    return failures == 0 ? 0 : 1;
}

int cmd_report(const std::string& in_dir) {
    std::ifstream f(fs::path(in_dir) / "summary.json");
    if (!f) return fail("no summary.json under " + in_dir);
    json summary;
    f >> summary;

    size_t runs = summary.at("run_count").get<size_t>();
    size_t ok = summary.at("success_count").get<size_t>();
    std::cout << "runs: " << runs << "  eclipsed: " << ok << "  (" << (runs ? 100.0 * ok / runs : 0)
              << "%)\n";
    if (!summary.at("eclipse_after_attack_quartiles_ns").is_null()) {
        auto q = summary.at("eclipse_after_attack_quartiles_ns");
        auto fmt = [](int64_t ns) {
            double mins = static_cast<double>(ns) / 6e10;
            char buf[64];
            if (mins < 120) std::snprintf(buf, sizeof(buf), "%.1f min", mins);
            else if (mins < 2880) std::snprintf(buf, sizeof(buf), "%.1f h", mins / 60);
            else std::snprintf(buf, sizeof(buf), "%.2f d", mins / 1440);
            return std::string(buf);
        };
        std::cout << "eclipse time after attack start: q1 " << fmt(q.at("q1").get<int64_t>())
                  << ", median " << fmt(q.at("median").get<int64_t>()) << ", q3 "
                  << fmt(q.at("q3").get<int64_t>()) << "\n";
    }
    for (const auto& run : summary.at("runs")) {
        std::cout << "  seed " << run.at("seed").get<uint64_t>() << ": "
                  << run.at("outcome").get<std::string>();
        if (run.contains("eclipse_after_attack_ns") && !run.at("eclipse_after_attack_ns").is_null())
            std::cout << " after " << run.at("eclipse_after_attack_ns").get<int64_t>() / 1000000000.0
                      << " s";
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kademlia-style discovery eclipse-attack simulator and analysis toolkit"};
    app.require_subcommand(1);

    // mine
    auto* mine = app.add_subcommand("mine", "mine bucket sybil ids and build an id pool");
    std::string victim_hex, mine_out = "plan";
    size_t pool_size = 100000;
    uint64_t seed = 1;
    mine->add_option("--victim", victim_hex, "victim node id, 64 hex chars")->required();
    mine->add_option("--out", mine_out, "output directory");
    mine->add_option("--pool-size", pool_size, "pre-computed pool size")
        ->check(CLI::PositiveNumber);
    mine->add_option("--seed", seed, "generator seed");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "closed forms vs Monte Carlo, as CSV");
    std::string grid = "all", analyze_out;
    uint64_t trials = 100000;
    uint64_t analyze_seed = 1;
    analyze->add_option("--grid", grid, "fig5, fig7, minid, all or none");
    analyze->add_option("--trials", trials, "Monte Carlo trials per cell")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--seed", analyze_seed, "generator seed");
    analyze->add_option("--out", analyze_out, "CSV output path (default stdout)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run scenario batches");
    std::string scenario = "geth-1.8", sim_out;
    std::vector<uint64_t> seeds;
    uint64_t seed_count = 0, seed_base = 1;
    bool no_attack = false, full_trace = false, opt_restart = false, opt_no_restart = false;
    int honest = -1, neighbors = 0;
    double duration_s = 0, dial_failure = -1, warmup_s = -1;
    size_t sim_pool = 0;
    simulate->add_option("--scenario", scenario, "preset (pre-1.8, geth-1.8, geth-1.9) or JSON file");
    simulate->add_option("--seeds", seeds, "explicit seed list");
    simulate->add_option("--seed-count", seed_count, "number of consecutive seeds");
    simulate->add_option("--seed", seed_base, "first seed for --seed-count (default 1)");
    simulate->add_option("--out", sim_out, "output directory for traces and summary");
    simulate->add_option("--duration-s", duration_s, "simulated cutoff after attack start");
    simulate->add_option("--honest", honest, "honest population size");
    simulate->add_option("--neighbors-limit", neighbors, "records per FindNode response (12 or 16)");
    simulate->add_option("--pool-size", sim_pool, "attack pool size");
    simulate->add_option("--dial-failure", dial_failure, "probability a dial to an honest record fails");
    simulate->add_option("--warmup-s", warmup_s, "pre-attack victim lifetime for no-restart runs");
    simulate->add_flag("--restart", opt_restart, "victim restarts at attack begin");
    simulate->add_flag("--no-restart", opt_no_restart, "long-running victim, attack after warmup");
    simulate->add_flag("--no-attack", no_attack, "baseline without an attacker");
    simulate->add_flag("--full-trace", full_trace, "record per-message and table events");

    // report
    auto* report = app.add_subcommand("report", "summarize a simulate output directory");
    std::string report_in;
    report->add_option("--in", report_in, "directory with summary.json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (mine->parsed()) return cmd_mine(victim_hex, mine_out, pool_size, seed);
        if (analyze->parsed()) return cmd_analyze(grid, trials, analyze_seed, analyze_out);
        if (simulate->parsed()) {
            ScenarioConfig cfg = load_scenario(scenario);
            if (duration_s > 0) cfg.duration_limit_s = duration_s;
            if (honest >= 0) cfg.honest_count = honest;
            if (neighbors > 0) cfg.neighbors_limit = static_cast<size_t>(neighbors);
            if (opt_restart) cfg.restart_victim = true;
            if (opt_no_restart) cfg.restart_victim = false;
            if (no_attack) cfg.attack.reset();
            if (sim_pool > 0 && cfg.attack) cfg.attack->pool_size = sim_pool;
            if (dial_failure >= 0) cfg.dial_failure_prob = dial_failure;
            if (warmup_s >= 0) cfg.warmup_s = warmup_s;
            cfg.full_trace = full_trace;
            cfg.validate();
            if (seeds.empty()) {
                for (uint64_t i = 0; i < std::max<uint64_t>(seed_count, 1); ++i)
                    seeds.push_back(seed_base + i);
            }
            return cmd_simulate(cfg, seeds, sim_out);
        }
        if (report->parsed()) return cmd_report(report_in);
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    return fail("no subcommand");
}
