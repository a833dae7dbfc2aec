// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#include "eclipsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "eclipsim/mining.hpp"
#include "eclipsim/node_id.hpp"

namespace eclipsim::analysis {

double bucket_entry_prob(int i) {
    if (i < 0 || i > 255) throw std::invalid_argument("log-distance must be in [0, 255]");
    return std::ldexp(1.0, i - 256);
}

uint64_t expected_keygens(int i) {
    if (i < 193 || i > 255)
        throw std::invalid_argument("expected_keygens is exact only for i in [193, 255]");
    return uint64_t{1} << (256 - i);
}

double single_order_stat_prob(int l, int N) {
    if (l < 1 || l > N) throw std::invalid_argument("order statistic index requires 1 <= l <= N");
    return static_cast<double>(l) / (static_cast<double>(N) + 1.0);
}

double findnode_query_prob(int l, int N, int a) {
    if (a < 0) throw std::invalid_argument("adversarial count must be >= 0");
    if (a == 0) return 0.0;
    double p = single_order_stat_prob(l, N);
    if (a == 1) return p;  // exact reduction to the single order statistic
    return 1.0 - std::pow(1.0 - p, a);
}

double min_id_single_draw_prob(uint64_t m) {
    return 1.0 / (static_cast<double>(m) + 1.0);
}

double mc_validate_findnode(int l, int N, int a, uint64_t trials, Rng& rng, DrawKind kind) {
    if (l < 1 || l > N) throw std::invalid_argument("order statistic index requires 1 <= l <= N");
    if (a < 0 || trials < 1) throw std::invalid_argument("bad validator arguments");

    // Each adversarial draw races the l-th order statistic of its own fresh
    // honest field -- the independent-race model the closed form compounds.
    // A race is lost as soon as l honest draws undercut the adversarial one;
    // stopping early leaves the indicator unchanged. The shared-field event
    // (all draws against one honest sample) is mc_findnode_combined_rank's
    // job, at k = l.
    uint64_t hits = 0;
    if (kind == DrawKind::Continuous) {
        for (uint64_t t = 0; t < trials; ++t) {
            for (int race = 0; race < a; ++race) {
                double z = rng.next_double();
                int below = 0;
                bool won = true;
                for (int i = 0; i < N; ++i) {
                    if (rng.next_double() < z && ++below >= l) {
                        won = false;
                        break;
                    }
                }
                if (won) {
                    ++hits;
                    break;
                }
            }
        }
    } else {
        for (uint64_t t = 0; t < trials; ++t) {
            NodeId target = generate_id(rng);
            for (int race = 0; race < a; ++race) {
                NodeId z = generate_id(rng);
                int below = 0;
                bool won = true;
                for (int i = 0; i < N; ++i) {
                    if (xor_less(generate_id(rng), z, target) && ++below >= l) {
                        won = false;
                        break;
                    }
                }
                if (won) {
                    ++hits;
                    break;
                }
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

double mc_findnode_combined_rank(int k, int N, int a, uint64_t trials, Rng& rng) {
    if (k < 1 || N < 0 || a < 0 || trials < 1)
        throw std::invalid_argument("bad validator arguments");
    std::vector<double> honest(static_cast<size_t>(N));
    uint64_t hits = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        for (auto& y : honest) y = rng.next_double();
        // The adversary makes the combined top-k iff fewer than k honest
        // values undercut the adversarial minimum.
        double adv_min = 2.0;
        for (int i = 0; i < a; ++i) adv_min = std::min(adv_min, rng.next_double());
        int honest_below = static_cast<int>(
            std::count_if(honest.begin(), honest.end(), [&](double y) { return y < adv_min; }));
        if (a > 0 && honest_below < k) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

double mc_validate_min_id(uint64_t m, uint64_t n, uint64_t trials, Rng& rng) {
    if (trials < 1) throw std::invalid_argument("bad validator arguments");
    uint64_t hits = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        NodeId target = generate_id(rng);
        for (uint64_t race = 0; race < n; ++race) {
            NodeId adv = generate_id(rng);
            // The race is lost at the first honest draw below the adversarial
            // one; stopping early does not change the indicator.
            bool won = true;
            for (uint64_t i = 0; i < m; ++i) {
                if (xor_less(generate_id(rng), adv, target)) {
                    won = false;
                    break;
                }
            }
            if (won) {
                ++hits;
                break;  // the trial already succeeded
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

double mc_min_id_shared_field(uint64_t m, uint64_t n, uint64_t trials, Rng& rng) {
    if (trials < 1) throw std::invalid_argument("bad validator arguments");
    uint64_t hits = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        NodeId target = generate_id(rng);
        if (n == 0) continue;
        NodeId adv_min;
        for (uint64_t i = 0; i < n; ++i) {
            NodeId y = generate_id(rng);
            if (i == 0 || xor_less(y, adv_min, target)) adv_min = y;
        }
        bool won = true;
        for (uint64_t i = 0; i < m; ++i) {
            if (xor_less(generate_id(rng), adv_min, target)) {
                won = false;
                break;
            }
        }
        if (won) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace eclipsim::analysis
