// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#include "sablock/blocksearch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sablock/errors.hpp"

namespace sablock {

namespace {

// Descending score, smaller index first on ties.
struct ByScoreDesc {
    std::span<const double> scores;
    bool operator()(TokenIndex a, TokenIndex b) const {
        return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
    }
};

struct Block {
    TokenIndex start;
    TokenIndex end;
    double phi;
};

// Top-k of [first, last) by score; appends to out (unordered).
void append_top_tokens(std::span<const double> scores, TokenIndex first, TokenIndex last, std::size_t k,
                       std::vector<TokenIndex>& out) {
    std::vector<TokenIndex> idx(last - first);
    std::iota(idx.begin(), idx.end(), first);
    k = std::min(k, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), ByScoreDesc{scores});
    out.insert(out.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
}

double mass(std::span<const double> scores, std::span<const TokenIndex> indices) {
    double sum = 0.0;
    for (auto t : indices) {
        sum += scores[t];
    }
    return sum;
}

}  // namespace

void validate_config(const SearchConfig& cfg) {
    if (cfg.budget < 1) {
        throw ConfigError("budget must be at least 1");
    }
    if (!(cfg.tau > 0.0 && cfg.tau <= 1.0)) {
        throw ConfigError("tau must lie in (0, 1]");
    }
    if (cfg.g_max < 1) {
        throw ConfigError("g_max must be at least 1");
    }
    if (!cfg.dense_range) {
        if (cfg.ladder.empty() || cfg.ladder.front() != 1) {
            throw ConfigError("block-size ladder must start at 1");
        }
        if (std::adjacent_find(cfg.ladder.begin(), cfg.ladder.end(),
                               [](std::size_t a, std::size_t b) { return a >= b; }) != cfg.ladder.end()) {
            throw ConfigError("block-size ladder must be strictly ascending");
        }
    }
}

std::vector<TokenIndex> select_top_b(std::span<const double> scores, std::size_t budget) {
    if (budget < 1) {
        throw ConfigError("budget must be at least 1");
    }
    std::vector<TokenIndex> idx(scores.size());
    std::iota(idx.begin(), idx.end(), TokenIndex{0});
    const std::size_t k = std::min(budget, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), ByScoreDesc{scores});
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::vector<std::size_t> implicit_budgets(std::span<const TokenIndex> selected, std::span<const Segment> segments) {
    std::vector<std::size_t> budgets(segments.size(), 0);
    for (auto t : selected) {
        ++budgets[segment_of(segments, t)];
    }
    return budgets;
}

std::vector<TokenIndex> greedy_block_cover(std::span<const double> scores, TokenIndex start, TokenIndex end,
                                           std::size_t budget, std::size_t g) {
    if (g < 1) {
        throw ConfigError("block size must be at least 1");
    }
    if (end < start || budget > end - start) {
        throw ConfigError("budget exceeds the covered span");
    }

    std::vector<Block> blocks;
    blocks.reserve((end - start + g - 1) / g);
    for (TokenIndex b = start; b < end; b += g) {
        const TokenIndex e = std::min(end, b + g);
        double phi = 0.0;
        for (TokenIndex t = b; t < e; ++t) {
            phi += scores[t];
        }
        blocks.push_back(Block{b, e, phi});
    }
    std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.phi > b.phi; });

    std::vector<TokenIndex> taken;
    taken.reserve(budget);
    for (const auto& block : blocks) {
        const std::size_t len = block.end - block.start;
        if (taken.size() + len <= budget) {
            for (TokenIndex t = block.start; t < block.end; ++t) {
                taken.push_back(t);
            }
        } else {
            append_top_tokens(scores, block.start, block.end, budget - taken.size(), taken);
            break;
        }
    }
    std::sort(taken.begin(), taken.end());
    return taken;
}

std::vector<TokenIndex> cover_segment(std::span<const double> scores, const Segment& seg, std::size_t budget,
                                      std::size_t g) {
    if (budget > seg.size()) {
        throw ConfigError("segment budget " + std::to_string(budget) + " exceeds segment length " +
                          std::to_string(seg.size()));
    }
    if (g < 1 || g > std::min(seg.size(), budget)) {
        throw ConfigError("block size " + std::to_string(g) + " outside [1, min(|segment|, budget)]");
    }
    return greedy_block_cover(scores, seg.start, seg.end, budget, g);
}

double fidelity_ratio(std::span<const double> scores, std::span<const TokenIndex> cover,
                      std::span<const TokenIndex> base) {
    const double denom = mass(scores, base);
    if (denom == 0.0) {
        return 1.0;
    }
    return mass(scores, cover) / denom;
}

std::vector<std::size_t> candidate_block_sizes(const Segment& seg, std::size_t budget, const SearchConfig& cfg) {
    const std::size_t limit = std::min({seg.size(), budget, cfg.g_max});
    std::vector<std::size_t> out;
    if (cfg.dense_range) {
        for (std::size_t g = 1; g <= limit; ++g) {
            out.push_back(g);
        }
    } else {
        for (auto g : cfg.ladder) {
            if (g >= 1 && g <= limit) {
                out.push_back(g);
            }
        }
    }
    return out;
}

SegmentPlan search_segment(std::span<const double> scores, const Segment& seg, std::size_t budget,
                           std::span<const TokenIndex> base, const SearchConfig& cfg) {
    SegmentPlan plan;
    plan.segment = seg;
    plan.budget = budget;
    if (budget == 0) {
        return plan;
    }

    const auto candidates = candidate_block_sizes(seg, budget, cfg);
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
        auto cover = cover_segment(scores, seg, budget, *it);
        const double r = fidelity_ratio(scores, cover, base);
        if (r >= cfg.tau || *it == 1) {
            // g = 1 reproduces the segment's share of the global top-B, so the
            // walk always ends here at the latest.
            plan.block_size = *it;
            plan.fidelity = r;
            plan.retained = std::move(cover);
            return plan;
        }
    }
    // Candidate lists always contain 1 when budget >= 1.
    throw std::logic_error("block-size search found no candidate");
}

CompressionPlan plan_from_scores(std::span<const double> adjusted, std::span<const Segment> segments,
                                 const SearchConfig& cfg) {
    validate_config(cfg);

    CompressionPlan plan;
    plan.budget = cfg.budget;
    plan.search = cfg;

    const auto top = select_top_b(adjusted, cfg.budget);
    const auto budgets = implicit_budgets(top, segments);

    plan.segments.reserve(segments.size());
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const auto& seg = segments[k];
        const auto lo = std::lower_bound(top.begin(), top.end(), seg.start);
        const auto hi = std::lower_bound(lo, top.end(), seg.end);
        const std::span<const TokenIndex> base(lo, hi);
        plan.segments.push_back(search_segment(adjusted, seg, budgets[k], base, cfg));
        const auto& chosen = plan.segments.back().retained;
        plan.retained.insert(plan.retained.end(), chosen.begin(), chosen.end());
    }

    if (plan.retained.size() != top.size()) {
        throw std::logic_error("retained set does not match the global budget");
    }
    return plan;
}

CompressionPlan compress(const AttentionTrace& trace, const ScoringConfig& scoring, const SearchConfig& search,
                         const SegmentationConfig& segmentation) {
    validate_trace(trace);
    validate_config(search);
    const auto segments = segment_tokens(trace, segmentation);
    const auto scores = score_trace(trace, segments, scoring);

    auto plan = plan_from_scores(scores.adjusted, segments, search);
    plan.scoring = scoring;
    plan.segmentation = segmentation;

    const std::size_t T = trace.compressible_length();
    plan.window_tokens.resize(trace.window);
    std::iota(plan.window_tokens.begin(), plan.window_tokens.end(), T);
    return plan;
}

}  // namespace sablock
