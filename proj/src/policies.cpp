// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#include "sablock/policies.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "sablock/errors.hpp"

namespace sablock {

namespace {

void require_budget(std::size_t budget) {
    if (budget < 1) {
        throw ConfigError("budget must be at least 1");
    }
}

std::vector<TokenIndex> all_tokens(std::size_t T) {
    std::vector<TokenIndex> idx(T);
    std::iota(idx.begin(), idx.end(), TokenIndex{0});
    return idx;
}

std::size_t parse_chunk_size(std::string_view name) {
    const auto arg = name.substr(std::string_view("chunkkv:").size());
    std::size_t g = 0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), g);
    if (ec != std::errc{} || ptr != arg.data() + arg.size() || g < 1) {
        throw ConfigError("malformed policy '" + std::string(name) + "': expected chunkkv:<g> with g >= 1");
    }
    return g;
}

}  // namespace

PolicyResult evict_sliding_window(const AttentionTrace& trace, std::size_t budget, std::size_t n_init) {
    require_budget(budget);
    if (n_init > budget) {
        throw ConfigError("n_init (" + std::to_string(n_init) + ") exceeds the budget (" + std::to_string(budget) + ")");
    }
    const std::size_t T = trace.compressible_length();
    PolicyResult out{"streaming", {}, std::nullopt, std::nullopt};
    if (budget >= T) {
        out.retained = all_tokens(T);
        return out;
    }
    for (TokenIndex t = 0; t < n_init; ++t) {
        out.retained.push_back(t);
    }
    for (TokenIndex t = T - (budget - n_init); t < T; ++t) {
        out.retained.push_back(t);
    }
    return out;
}

PolicyResult evict_cumulative(const AttentionTrace& trace, std::size_t budget) {
    require_budget(budget);
    const auto scores = window_scores(head_mean(trace));
    return PolicyResult{"h2o", select_top_b(scores, budget), std::nullopt, std::nullopt};
}

PolicyResult evict_window_topk(const AttentionTrace& trace, std::size_t budget) {
    require_budget(budget);
    const auto scores = window_scores(head_mean(trace));
    return PolicyResult{"snapkv", select_top_b(scores, budget), std::nullopt, std::nullopt};
}

PolicyResult evict_fixed_block(const AttentionTrace& trace, std::size_t budget, std::size_t g) {
    require_budget(budget);
    if (g < 1) {
        throw ConfigError("block size must be at least 1");
    }
    const std::size_t T = trace.compressible_length();
    const auto scores = window_scores(head_mean(trace));
    return PolicyResult{"chunkkv:" + std::to_string(g), greedy_block_cover(scores, 0, T, std::min(budget, T), g), g,
                        std::nullopt};
}

PolicyResult evict_sentence(const AttentionTrace& trace, std::size_t budget, const SegmentationConfig& seg) {
    require_budget(budget);
    const std::size_t T = trace.compressible_length();
    const auto segments = segment_tokens(trace, seg);
    const auto scores = window_scores(head_mean(trace));
    budget = std::min(budget, T);

    std::vector<double> mean(segments.size());
    for (std::size_t k = 0; k < segments.size(); ++k) {
        double sum = 0.0;
        for (TokenIndex t = segments[k].start; t < segments[k].end; ++t) {
            sum += scores[t];
        }
        mean[k] = sum / static_cast<double>(segments[k].size());
    }
    std::vector<std::size_t> order(segments.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mean[a] > mean[b]; });

    PolicyResult out{"sentencekv", {}, std::nullopt, std::nullopt};
    for (auto k : order) {
        const auto& s = segments[k];
        const std::size_t room = budget - out.retained.size();
        if (room == 0) {
            break;
        }
        if (s.size() <= room) {
            for (TokenIndex t = s.start; t < s.end; ++t) {
                out.retained.push_back(t);
            }
            continue;
        }
        for (auto t : select_top_b(std::span<const double>(scores).subspan(s.start, s.size()), room)) {
            out.retained.push_back(s.start + t);
        }
        break;
    }
    std::sort(out.retained.begin(), out.retained.end());
    return out;
}

PolicyResult evict_sablock(const AttentionTrace& trace, const ScoringConfig& scoring, const SearchConfig& search,
                           const SegmentationConfig& seg) {
    auto plan = compress(trace, scoring, search, seg);
    PolicyResult out{"sablock", plan.retained, std::nullopt, std::nullopt};
    out.plan = std::move(plan);
    return out;
}

const std::vector<std::string>& policy_names() {
    static const std::vector<std::string> names = {"streaming", "h2o", "snapkv", "chunkkv:<g>", "sentencekv", "sablock"};
    return names;
}

void validate_policy_name(std::string_view name) {
    if (name == "streaming" || name == "h2o" || name == "snapkv" || name == "sentencekv" || name == "sablock") {
        return;
    }
    if (name.starts_with("chunkkv:")) {
        parse_chunk_size(name);
        return;
    }
    std::string valid;
    for (const auto& n : policy_names()) {
        valid += (valid.empty() ? "" : ", ") + n;
    }
    throw ConfigError("unknown policy '" + std::string(name) + "' (valid: " + valid + ")");
}

PolicyResult run_policy(std::string_view name, const AttentionTrace& trace, std::size_t budget,
                        const PolicyOptions& options) {
    validate_policy_name(name);
    if (name == "streaming") {
        return evict_sliding_window(trace, budget, std::min(options.n_init, budget));
    }
    if (name == "h2o") {
        return evict_cumulative(trace, budget);
    }
    if (name == "snapkv") {
        return evict_window_topk(trace, budget);
    }
    if (name == "sentencekv") {
        return evict_sentence(trace, budget, options.segmentation);
    }
    if (name == "sablock") {
        auto search = options.search;
        search.budget = budget;
        return evict_sablock(trace, options.scoring, search, options.segmentation);
    }
    return evict_fixed_block(trace, budget, parse_chunk_size(name));
}

}  // namespace sablock
