// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#include "sablock/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "sablock/errors.hpp"

namespace sablock {

namespace {

double mass(std::span<const double> scores, std::span<const TokenIndex> indices) {
    double sum = 0.0;
    for (auto t : indices) {
        sum += scores[t];
    }
    return sum;
}

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) {
            ++j;
        }
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double cross_sentence_rate(std::span<const Segment> segments, std::size_t g, std::size_t T) {
    if (g < 1) {
        throw MetricError("block size must be at least 1");
    }
    if (T == 0) {
        return 0.0;
    }
    std::size_t blocks = 0;
    std::size_t crossing = 0;
    for (TokenIndex b = 0; b < T; b += g) {
        const TokenIndex last = std::min(T, b + g) - 1;
        ++blocks;
        if (segment_of(segments, b) != segment_of(segments, last)) {
            ++crossing;
        }
    }
    return static_cast<double>(crossing) / static_cast<double>(blocks);
}

double retention_fidelity(std::span<const double> scores, std::span<const TokenIndex> retained, std::size_t budget) {
    const auto top = select_top_b(scores, std::max<std::size_t>(budget, 1));
    const double denom = mass(scores, top);
    if (denom == 0.0) {
        return 1.0;
    }
    return mass(scores, retained) / denom;
}

double redundancy_rate(std::span<const double> scores, std::span<const TokenIndex> retained, std::size_t budget) {
    return std::clamp(1.0 - retention_fidelity(scores, retained, budget), 0.0, 1.0);
}

double needle_recall(std::span<const TokenIndex> retained, const NeedleSpan& needle) {
    if (needle.length == 0) {
        throw MetricError("needle span is empty");
    }
    const auto hits = std::count_if(retained.begin(), retained.end(), [&](TokenIndex t) { return needle.contains(t); });
    return static_cast<double>(hits) / static_cast<double>(needle.length);
}

BlockSizeHistogram blocksize_histogram(std::span<const CompressionPlan> plans) {
    BlockSizeHistogram h;
    double sum = 0.0;
    for (const auto& plan : plans) {
        for (const auto& sp : plan.segments) {
            if (sp.budget == 0) {
                continue;
            }
            ++h.counts[sp.block_size];
            ++h.total;
            sum += static_cast<double>(sp.block_size);
        }
    }
    h.mean = h.total > 0 ? sum / static_cast<double>(h.total) : 0.0;
    return h;
}

std::uint64_t kv_bytes_estimate(std::uint64_t batch, std::uint64_t layers, std::uint64_t seq_len,
                                std::uint64_t heads, std::uint64_t head_dim, std::uint64_t bytes_per_value) {
    std::uint64_t total = 2;
    for (std::uint64_t factor : {batch, layers, seq_len, heads, head_dim, bytes_per_value}) {
        if (factor == 0) {
            throw MetricError("KV size factors must be positive");
        }
        if (total > std::numeric_limits<std::uint64_t>::max() / factor) {
            throw MetricError("KV size estimate overflows 64 bits");
        }
        total *= factor;
    }
    return total;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw MetricError("spearman: inputs differ in length");
    }
    if (x.size() < 2) {
        throw MetricError("spearman: need at least two points");
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

nlohmann::json histogram_to_json(const BlockSizeHistogram& h) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [g, n] : h.counts) {
        counts[std::to_string(g)] = n;
    }
    return nlohmann::json{{"counts", counts}, {"segments", h.total}, {"mean_block_size", h.mean}};
}

nlohmann::json MetricReport::to_json() const {
    nlohmann::json doc{{"title", title}, {"metrics", values}, {"config", config}};
    if (histogram) {
        doc["histogram"] = histogram_to_json(*histogram);
    }
    return doc;
}

std::string MetricReport::to_text() const {
    std::size_t width = 0;
    for (const auto& [name, _] : values) {
        width = std::max(width, name.size());
    }
    std::ostringstream out;
    if (!title.empty()) {
        out << title << '\n';
    }
    for (const auto& [name, value] : values) {
        out << "  " << std::left << std::setw(static_cast<int>(width)) << name << "  ";
        // counts and byte totals print exactly; doubles hold integers up to 2^53
        if (value == std::floor(value) && std::abs(value) < 9007199254740992.0) {
            out << static_cast<long long>(value) << '\n';
        } else {
            out << std::setprecision(6) << value << '\n';
        }
    }
    if (histogram) {
        out << "  block sizes (mean " << std::setprecision(4) << histogram->mean << "):";
        for (const auto& [g, n] : histogram->counts) {
            out << ' ' << g << 'x' << n;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace sablock
