// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sablock/segment.hpp"
#include "sablock/trace.hpp"

namespace sablock {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : m_rows(rows), m_cols(cols), m_data(rows * cols, fill) {}

    std::size_t rows() const { return m_rows; }
    std::size_t cols() const { return m_cols; }

    double& operator()(std::size_t r, std::size_t c) { return m_data[r * m_cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return m_data[r * m_cols + c]; }

    std::span<const double> data() const { return m_data; }

private:
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<double> m_data;
};

struct ScoringConfig {
    double alpha = 0.9;     // segment-factor influence on token scores
    double eta = 1.0;       // weight of diversity relative to importance
    double epsilon = 1e-6;  // smoothing inside the entropy logarithm

    bool operator==(const ScoringConfig&) const = default;
};

/// Throws ConfigError unless alpha >= 0, eta >= 0 and epsilon > 0 (all finite).
void validate_config(const ScoringConfig& cfg);

struct SegmentStats {
    std::vector<double> importance;  // mean window score per segment
    std::vector<double> diversity;   // mean per-token attention entropy (nats)
};

struct ScoreSet {
    Matrix head_mean;                  // [window][T]
    std::vector<double> raw;           // window score per token
    std::vector<double> adjusted;      // segment-guided score per token
    std::vector<double> seg_importance;
    std::vector<double> seg_diversity;
    std::vector<double> seg_weight;
};

/// Mean over heads: result(q, t) = (1/H) * sum_h A[h][q][t].
Matrix head_mean(const AttentionTrace& trace);

/// Column sums of the head-mean matrix.
std::vector<double> window_scores(const Matrix& head_mean);

/// Per-segment importance (mean window score) and diversity.
///
/// Diversity is the segment mean of the per-token entropy
/// -sum_q p(q|t) * ln(p(q|t) + epsilon), with p(.|t) the token's column of
/// `head_mean` normalized to one. Columns that sum to zero contribute zero.
/// The epsilon term can push a fully concentrated column a hair below zero;
/// segment diversity is floored at zero.
SegmentStats segment_stats(const Matrix& head_mean, std::span<const double> scores,
                           std::span<const Segment> segments, double epsilon);

/// weight_k = importance_k * (1 + eta * diversity_k)
std::vector<double> segment_weights(std::span<const double> importance, std::span<const double> diversity,
                                    double eta);

/// adjusted_t = score_t * (1 + alpha * weight_{segment(t)}), with a one-ulp
/// correction wherever rounding would otherwise tie two distinct raw scores
/// of the same segment.
std::vector<double> adjusted_scores(std::span<const double> scores, std::span<const double> weights,
                                    std::span<const Segment> segments, double alpha);

/// Full segment-guided scoring pass over a trace.
ScoreSet score_trace(const AttentionTrace& trace, std::span<const Segment> segments, const ScoringConfig& cfg = {});

}  // namespace sablock
