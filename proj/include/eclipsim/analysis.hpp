// Copyright (c) 2026 The eclipsim developers
// Distributed under the MIT software license, see the accompanying file LICENSE.

#pragma once

#include <cstdint>

#include "eclipsim/rng.hpp"

namespace eclipsim::analysis {

/// Probability that a fresh uniform 256-bit id lands at log-distance i from a
/// fixed id: 2^(i-256). Valid for 0 <= i <= 255.
double bucket_entry_prob(int i);

/// Expected id generations until one lands at log-distance i: 2^(256-i),
/// exact in 64-bit integers for 193 <= i <= 255.
uint64_t expected_keygens(int i);

/// Probability that one uniform draw ranks below the l-th smallest of N
/// uniform draws: l/(N+1). Requires 1 <= l <= N.
double single_order_stat_prob(int l, int N);

/// Probability that at least one of a adversarial uniform draws ranks below
/// the l-th smallest of N honest uniform draws: 1 - (1 - l/(N+1))^a.
/// a == 0 yields 0.
double findnode_query_prob(int l, int N, int a);

/// Probability that one fresh uniform draw undercuts the minimum of m
/// competing uniform draws: 1/(m+1).
double min_id_single_draw_prob(uint64_t m);

enum class DrawKind {
    Continuous,   // real-valued uniforms on [0,1]
    Discrete256,  // 256-bit ids ranked by xor-distance to a fresh target
};

/// Brute-force validator for findnode_query_prob, per the model the closed
/// form compounds: each of the a adversarial draws races the l-th smallest of
/// its own fresh field of N honest draws, and a trial succeeds when any race
/// is won. The shared-field variant (one honest sample per trial) is
/// mc_findnode_combined_rank with k = l.
double mc_validate_findnode(int l, int N, int a, uint64_t trials, Rng& rng,
                            DrawKind kind = DrawKind::Continuous);

/// Exact combined-ranking variant: success iff at least one adversarial draw
/// is among the k smallest of the pooled N+a draws. At a == 1 this equals
/// k/(N+1) (the threshold form with l = k), strictly below the l = k+1
/// threshold the closed form uses, so the overcount is directly measurable.
double mc_findnode_combined_rank(int k, int N, int a, uint64_t trials, Rng& rng);

/// Validator for min_beats_network_prob, faithful to the model the closed
/// form compounds: each of the n adversarial draws races the minimum of its
/// own fresh field of m honest draws (real 256-bit ids compared by
/// xor-distance to the trial's target), and a trial succeeds when any race is
/// won. Races share nothing, so the success probability is exactly
/// 1 - (1 - 1/(m+1))^n.
double mc_validate_min_id(uint64_t m, uint64_t n, uint64_t trials, Rng& rng);

/// The same race against one shared honest field per trial: the pool minimum
/// versus the minimum of m honest draws, which is the literal single-lookup
/// event and equals n/(m+n). Reported alongside the closed form so the gap
/// introduced by the independence assumption stays visible.
double mc_min_id_shared_field(uint64_t m, uint64_t n, uint64_t trials, Rng& rng);

}  // namespace eclipsim::analysis
