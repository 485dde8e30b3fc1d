// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "sablock/blocksearch.hpp"
#include "sablock/segment.hpp"
#include "sablock/trace.hpp"

namespace sablock {

/// Fraction of consecutive g-blocks over [0, T) that touch two or more segments.
double cross_sentence_rate(std::span<const Segment> segments, std::size_t g, std::size_t T);

/// 1 - mass(retained) / mass(top-B), clamped to [0, 1]; 0 when the top-B mass is 0.
double redundancy_rate(std::span<const double> scores, std::span<const TokenIndex> retained, std::size_t budget);

/// mass(retained) / mass(top-B); 1 when the top-B mass is 0.
double retention_fidelity(std::span<const double> scores, std::span<const TokenIndex> retained, std::size_t budget);

/// Fraction of needle tokens that were retained. Throws MetricError on an empty needle.
double needle_recall(std::span<const TokenIndex> retained, const NeedleSpan& needle);

struct BlockSizeHistogram {
    std::map<std::size_t, std::size_t> counts;  // block size -> segments
    std::size_t total = 0;
    double mean = 0.0;  // segment-weighted mean block size
};

/// Chosen block sizes over every segment with a non-zero implicit budget.
BlockSizeHistogram blocksize_histogram(std::span<const CompressionPlan> plans);

/// 2 * batch * layers * seq_len * heads * head_dim * bytes_per_value.
/// Throws MetricError on a zero argument or on 64-bit overflow.
std::uint64_t kv_bytes_estimate(std::uint64_t batch, std::uint64_t layers, std::uint64_t seq_len,
                                std::uint64_t heads, std::uint64_t head_dim, std::uint64_t bytes_per_value);

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either side is constant; throws MetricError on mismatched or short input.
double spearman(std::span<const double> x, std::span<const double> y);

/// Named scalar metrics with an optional block-size histogram.
struct MetricReport {
    std::string title;
    std::map<std::string, double> values;
    std::optional<BlockSizeHistogram> histogram;
    nlohmann::json config = nlohmann::json::object();

    nlohmann::json to_json() const;
    /// Aligned two-column text.
    std::string to_text() const;
};

nlohmann::json histogram_to_json(const BlockSizeHistogram& h);

}  // namespace sablock
