// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#include "sablock/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sablock/errors.hpp"

namespace sablock {

void validate_config(const ScoringConfig& cfg) {
    if (!std::isfinite(cfg.alpha) || cfg.alpha < 0.0) {
        throw ConfigError("alpha must be a finite value >= 0");
    }
    if (!std::isfinite(cfg.eta) || cfg.eta < 0.0) {
        throw ConfigError("eta must be a finite value >= 0");
    }
    if (!std::isfinite(cfg.epsilon) || cfg.epsilon <= 0.0) {
        throw ConfigError("epsilon must be a finite value > 0");
    }
}

Matrix head_mean(const AttentionTrace& trace) {
    const std::size_t T = trace.compressible_length();
    Matrix mean(trace.window, T);
    for (std::size_t h = 0; h < trace.num_heads; ++h) {
        for (std::size_t q = 0; q < trace.window; ++q) {
            for (std::size_t t = 0; t < T; ++t) {
                mean(q, t) += trace.at(h, q, t);
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(trace.num_heads);
    for (std::size_t q = 0; q < trace.window; ++q) {
        for (std::size_t t = 0; t < T; ++t) {
            mean(q, t) *= inv;
        }
    }
    return mean;
}

std::vector<double> window_scores(const Matrix& head_mean) {
    std::vector<double> scores(head_mean.cols(), 0.0);
    for (std::size_t q = 0; q < head_mean.rows(); ++q) {
        for (std::size_t t = 0; t < head_mean.cols(); ++t) {
            scores[t] += head_mean(q, t);
        }
    }
    return scores;
}

SegmentStats segment_stats(const Matrix& head_mean, std::span<const double> scores,
                           std::span<const Segment> segments, double epsilon) {
    SegmentStats stats;
    stats.importance.reserve(segments.size());
    stats.diversity.reserve(segments.size());

    for (const auto& seg : segments) {
        double score_sum = 0.0;
        double entropy_sum = 0.0;
        for (TokenIndex t = seg.start; t < seg.end; ++t) {
            score_sum += scores[t];

            double column = 0.0;
            for (std::size_t q = 0; q < head_mean.rows(); ++q) {
                column += head_mean(q, t);
            }
            if (column <= 0.0) {
                continue;
            }
            double plogp = 0.0;
            for (std::size_t q = 0; q < head_mean.rows(); ++q) {
                const double p = head_mean(q, t) / column;
                plogp += p * std::log(p + epsilon);
            }
            entropy_sum -= plogp;
        }
        const double n = static_cast<double>(seg.size());
        stats.importance.push_back(score_sum / n);
        stats.diversity.push_back(std::max(0.0, entropy_sum / n));
    }
    return stats;
}

std::vector<double> segment_weights(std::span<const double> importance, std::span<const double> diversity,
                                    double eta) {
    std::vector<double> weights(importance.size());
    for (std::size_t k = 0; k < importance.size(); ++k) {
        weights[k] = importance[k] * (1.0 + eta * diversity[k]);
    }
    return weights;
}

std::vector<double> adjusted_scores(std::span<const double> scores, std::span<const double> weights,
                                    std::span<const Segment> segments, double alpha) {
    std::vector<double> adjusted(scores.begin(), scores.end());
    std::vector<TokenIndex> order;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const double factor = 1.0 + alpha * weights[k];
        if (factor == 1.0) {
            continue;
        }
        for (TokenIndex t = segments[k].start; t < segments[k].end; ++t) {
            adjusted[t] = scores[t] * factor;
        }

        // Rounding can map two raw scores a few ulps apart onto the same
        // product. Walk the segment in ascending raw order and bump any such
        // collapse by one ulp so the within-segment order survives exactly.
        order.resize(segments[k].size());
        std::iota(order.begin(), order.end(), segments[k].start);
        std::sort(order.begin(), order.end(), [&](TokenIndex a, TokenIndex b) { return scores[a] < scores[b]; });
        for (std::size_t i = 1; i < order.size(); ++i) {
            const TokenIndex prev = order[i - 1];
            const TokenIndex cur = order[i];
            if (scores[cur] == scores[prev]) {
                adjusted[cur] = adjusted[prev];
            } else if (adjusted[cur] <= adjusted[prev]) {
                adjusted[cur] = std::nextafter(adjusted[prev], std::numeric_limits<double>::infinity());
            }
        }
    }
    return adjusted;
}

ScoreSet score_trace(const AttentionTrace& trace, std::span<const Segment> segments, const ScoringConfig& cfg) {
    validate_config(cfg);
    ScoreSet out;
    out.head_mean = head_mean(trace);
    out.raw = window_scores(out.head_mean);
    auto stats = segment_stats(out.head_mean, out.raw, segments, cfg.epsilon);
    out.seg_weight = segment_weights(stats.importance, stats.diversity, cfg.eta);
    out.seg_importance = std::move(stats.importance);
    out.seg_diversity = std::move(stats.diversity);
    out.adjusted = adjusted_scores(out.raw, out.seg_weight, segments, cfg.alpha);
    return out;
}

}  // namespace sablock
