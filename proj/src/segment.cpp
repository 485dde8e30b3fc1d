// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#include "sablock/segment.hpp"

#include <algorithm>

#include "sablock/errors.hpp"

namespace sablock {

namespace {

bool ends_with_delimiter(const std::string& text, const std::string& delimiters) {
    return !text.empty() && delimiters.find(text.back()) != std::string::npos;
}

}  // namespace

std::vector<Segment> segment_tokens(std::span<const Token> tokens, std::size_t count,
                                    const SegmentationConfig& cfg) {
    if (cfg.max_len == 0) {
        throw ConfigError("max segment length must be positive");
    }
    count = std::min(count, tokens.size());

    std::vector<Segment> segments;
    auto emit = [&](TokenIndex start, TokenIndex end) {
        for (TokenIndex s = start; s < end; s += cfg.max_len) {
            segments.push_back(Segment{segments.size(), s, std::min(end, s + cfg.max_len)});
        }
    };

    TokenIndex start = 0;
    for (TokenIndex t = 0; t < count; ++t) {
        if (ends_with_delimiter(tokens[t].text, cfg.delimiters)) {
            emit(start, t + 1);
            start = t + 1;
        }
    }
    emit(start, count);
    return segments;
}

std::vector<Segment> segment_tokens(const AttentionTrace& trace, const SegmentationConfig& cfg) {
    return segment_tokens(trace.tokens, trace.compressible_length(), cfg);
}

std::size_t segment_of(std::span<const Segment> segments, TokenIndex t) {
    if (segments.empty() || t < segments.front().start || t >= segments.back().end) {
        throw IndexError("token " + std::to_string(t) + " is outside the segmented region");
    }
    const auto it = std::upper_bound(segments.begin(), segments.end(), t,
                                     [](TokenIndex value, const Segment& s) { return value < s.start; });
    return static_cast<std::size_t>(std::distance(segments.begin(), it)) - 1;
}

}  // namespace sablock
