// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sablock/blocksearch.hpp"
#include "sablock/scoring.hpp"
#include "sablock/segment.hpp"
#include "sablock/trace.hpp"

namespace sablock {

/// Output of an eviction policy over a trace's compressible region.
/// Window tokens are kept by every policy and are not listed.
struct PolicyResult {
    std::string name;
    std::vector<TokenIndex> retained;  // ascending, |retained| = min(B, T)
    std::optional<std::size_t> block_size;
    std::optional<CompressionPlan> plan;  // set by the segment-aware policy
};

/// Keeps the first n_init and the most recent budget - n_init compressible
/// tokens. Throws ConfigError when n_init > budget or budget < 1.
PolicyResult evict_sliding_window(const AttentionTrace& trace, std::size_t budget, std::size_t n_init);

/// Top-B by attention accumulated over every available query. With a single
/// observation snapshot the accumulation domain is the window itself.
PolicyResult evict_cumulative(const AttentionTrace& trace, std::size_t budget);

/// Top-B by observation-window score.
PolicyResult evict_window_topk(const AttentionTrace& trace, std::size_t budget);

/// Fixed-size blocks over the whole compressible region, ranked by block
/// score, with the first non-fitting block refined token by token.
PolicyResult evict_fixed_block(const AttentionTrace& trace, std::size_t budget, std::size_t g);

/// Whole segments ranked by mean window score, with the first non-fitting
/// segment refined token by token.
PolicyResult evict_sentence(const AttentionTrace& trace, std::size_t budget, const SegmentationConfig& seg = {});

/// Segment-aware adaptive block compression.
PolicyResult evict_sablock(const AttentionTrace& trace, const ScoringConfig& scoring, const SearchConfig& search,
                           const SegmentationConfig& seg = {});

struct PolicyOptions {
    ScoringConfig scoring;
    SearchConfig search;  // search.budget is overridden by the call's budget
    SegmentationConfig segmentation;
    std::size_t n_init = 4;  // sink tokens for the sliding-window policy
};

/// CLI-facing names: streaming, h2o, snapkv, chunkkv:<g>, sentencekv, sablock.
const std::vector<std::string>& policy_names();

/// Throws ConfigError for an unknown name or a malformed chunkkv:<g>.
void validate_policy_name(std::string_view name);

PolicyResult run_policy(std::string_view name, const AttentionTrace& trace, std::size_t budget,
                        const PolicyOptions& options = {});

}  // namespace sablock
