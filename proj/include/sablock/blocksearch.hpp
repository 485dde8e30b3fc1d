// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sablock/scoring.hpp"
#include "sablock/segment.hpp"
#include "sablock/trace.hpp"

namespace sablock {

inline const std::vector<std::size_t> kDefaultLadder = {1, 2, 3, 5, 7, 9, 11, 13};

struct SearchConfig {
    std::size_t budget = 96;
    double tau = 0.85;
    std::size_t g_max = 13;
    std::vector<std::size_t> ladder = kDefaultLadder;
    bool dense_range = false;  // search every g in [1, g_max] instead of the ladder

    bool operator==(const SearchConfig&) const = default;
};

/// Throws ConfigError on budget < 1, tau outside (0, 1], g_max < 1, or a
/// ladder that is not strictly ascending, positive and containing 1.
void validate_config(const SearchConfig& cfg);

struct SegmentPlan {
    Segment segment;
    std::size_t budget = 0;      // implicit budget b_k
    std::size_t block_size = 1;  // chosen g_k*
    double fidelity = 1.0;       // R_k(g_k*)
    std::vector<TokenIndex> retained;

    bool operator==(const SegmentPlan&) const = default;
};

struct CompressionPlan {
    std::size_t budget = 0;
    std::vector<SegmentPlan> segments;
    std::vector<TokenIndex> retained;       // ascending, compressible indices
    std::vector<TokenIndex> window_tokens;  // ascending, absolute indices T..T+window-1
    ScoringConfig scoring;
    SearchConfig search;
    SegmentationConfig segmentation;

    bool operator==(const CompressionPlan&) const = default;
};

/// Indices of the min(budget, n) largest scores, ascending. Equal scores
/// prefer the smaller index. Throws ConfigError when budget < 1.
std::vector<TokenIndex> select_top_b(std::span<const double> scores, std::size_t budget);

/// Number of selected indices falling inside each segment.
std::vector<std::size_t> implicit_budgets(std::span<const TokenIndex> selected, std::span<const Segment> segments);

/// Greedy block cover of [start, end) at block size g.
///
/// Blocks of g consecutive tokens are anchored at `start` (the last may be
/// shorter) and visited by descending block sum, leftmost first on ties.
/// Whole blocks are taken while they fit in `budget`; the first block that
/// does not fit contributes its top-(budget - taken) tokens and the walk
/// stops. Requires g >= 1 and budget <= end - start. Returns ascending
/// indices, exactly `budget` of them.
std::vector<TokenIndex> greedy_block_cover(std::span<const double> scores, TokenIndex start, TokenIndex end,
                                           std::size_t budget, std::size_t g);

/// Block cover of one segment; requires 1 <= g <= min(|seg|, budget) and
/// budget <= |seg|, otherwise throws ConfigError.
std::vector<TokenIndex> cover_segment(std::span<const double> scores, const Segment& seg, std::size_t budget,
                                      std::size_t g);

/// Retained score mass of `cover` relative to `base`; 1 when the base mass is 0.
double fidelity_ratio(std::span<const double> scores, std::span<const TokenIndex> cover,
                      std::span<const TokenIndex> base);

/// Block sizes searched for a segment, ascending.
std::vector<std::size_t> candidate_block_sizes(const Segment& seg, std::size_t budget, const SearchConfig& cfg);

/// Picks the largest candidate block size whose cover keeps at least `tau`
/// of the token-level baseline mass. `base` must be the segment's share of
/// the global top-B selection.
SegmentPlan search_segment(std::span<const double> scores, const Segment& seg, std::size_t budget,
                           std::span<const TokenIndex> base, const SearchConfig& cfg);

/// Block search over already-scored segments.
CompressionPlan plan_from_scores(std::span<const double> adjusted, std::span<const Segment> segments,
                                 const SearchConfig& cfg);

/// Segmentation, segment-guided scoring and adaptive block search over a trace.
CompressionPlan compress(const AttentionTrace& trace, const ScoringConfig& scoring, const SearchConfig& search,
                         const SegmentationConfig& segmentation = {});

}  // namespace sablock
