// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sablock/trace.hpp"

namespace sablock {

/// Half-open span [start, end) of compressible-region token indices.
struct Segment {
    std::size_t index = 0;
    TokenIndex start = 0;
    TokenIndex end = 0;

    std::size_t size() const { return end - start; }
    bool contains(TokenIndex t) const { return t >= start && t < end; }
    bool operator==(const Segment&) const = default;
};

inline const std::string kDefaultDelimiters = ".!?;:,\n";
inline constexpr std::size_t kDefaultMaxSegmentLength = 256;

struct SegmentationConfig {
    std::string delimiters = kDefaultDelimiters;
    std::size_t max_len = kDefaultMaxSegmentLength;

    bool operator==(const SegmentationConfig&) const = default;
};

/// Punctuation segmentation of the first `count` tokens. A token whose text
/// ends with a delimiter character closes the current span (the delimiter
/// stays on the left); spans longer than `max_len` are then cut left to right.
std::vector<Segment> segment_tokens(std::span<const Token> tokens, std::size_t count,
                                    const SegmentationConfig& cfg = {});

/// Segments the compressible region of a trace.
std::vector<Segment> segment_tokens(const AttentionTrace& trace, const SegmentationConfig& cfg = {});

/// Index of the segment containing t. Throws IndexError when t lies outside
/// the tiled range.
std::size_t segment_of(std::span<const Segment> segments, TokenIndex t);

}  // namespace sablock
