// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"

#include "sablock/errors.hpp"
#include "sablock/metrics.hpp"
#include "sablock/policies.hpp"
#include "test_support.hpp"

using namespace sablock;
using Indices = std::vector<TokenIndex>;

namespace {

// Crossing blocks counted by listing every block's member segments.
double brute_cross_rate(const std::vector<Segment>& segs, std::size_t g, std::size_t T) {
    std::size_t blocks = 0, crossing = 0;
    for (std::size_t b = 0; b < T; b += g) {
        std::vector<std::size_t> owners;
        for (std::size_t t = b; t < std::min(T, b + g); ++t) {
            for (const auto& s : segs) {
                if (s.contains(t) && (owners.empty() || owners.back() != s.index)) {
                    owners.push_back(s.index);
                }
            }
        }
        ++blocks;
        crossing += owners.size() >= 2 ? 1 : 0;
    }
    return static_cast<double>(crossing) / static_cast<double>(blocks);
}

}  // namespace

TEST_CASE("cross_sentence_rate") {
    const std::vector<Segment> a{{0, 0, 4}, {1, 4, 7}};
    CHECK(cross_sentence_rate(a, 1, 7) == 0.0);
    // blocks {0,1},{2,3},{4,5},{6}: the boundary at 4 falls between blocks
    CHECK(cross_sentence_rate(a, 2, 7) == brute_cross_rate(a, 2, 7));
    CHECK(cross_sentence_rate(a, 2, 7) == 0.0);

    const std::vector<Segment> b{{0, 0, 3}, {1, 3, 6}};
    CHECK(cross_sentence_rate(b, 2, 6) == brute_cross_rate(b, 2, 6));
    CHECK(cross_sentence_rate(b, 2, 6) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(cross_sentence_rate(b, 0, 6), MetricError);

    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        const auto trace = testing::random_trace(rng, 1 + i * 3, 1, 1, 0.2);
        const auto segs = segment_tokens(trace);
        const std::size_t T = trace.compressible_length();
        CHECK(cross_sentence_rate(segs, 1, T) == 0.0);
        for (std::size_t g : {2u, 3u, 7u}) {
            CHECK(cross_sentence_rate(segs, g, T) == doctest::Approx(brute_cross_rate(segs, g, T)));
        }
    }
}

TEST_CASE("redundancy and fidelity") {
    const std::vector<double> s{5, 1, 1, 4};
    CHECK(redundancy_rate(s, Indices{0, 3}, 2) == 0.0);
    CHECK(redundancy_rate(s, Indices{0, 1}, 2) == doctest::Approx(1.0 - 6.0 / 9.0));
    CHECK(redundancy_rate(std::vector<double>{0, 0, 0}, Indices{0}, 1) == 0.0);

    CHECK(retention_fidelity(s, Indices{0, 3}, 2) == 1.0);
    CHECK(retention_fidelity(s, Indices{0, 1}, 2) == doctest::Approx(6.0 / 9.0));

    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        const auto trace = testing::random_trace(rng, 40, 1, 2, 0.2);
        const auto scores = window_scores(head_mean(trace));
        const std::size_t b = 1 + static_cast<std::size_t>(i % 40);
        const auto r = evict_fixed_block(trace, b, 1 + static_cast<std::size_t>(i % 9));
        const double red = redundancy_rate(scores, r.retained, b);
        CHECK(red >= 0.0);
        CHECK(red <= 1.0);
        CHECK(red == doctest::Approx(1.0 - retention_fidelity(scores, r.retained, b)).epsilon(1e-12));
    }
}

TEST_CASE("sablock at tau = 1 keeps full fidelity") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 30; ++i) {
        const auto trace = testing::random_trace(rng, 100, 2, 4, 0.15);
        SearchConfig cfg;
        cfg.tau = 1.0;
        cfg.budget = 5 + static_cast<std::size_t>(i) * 3;
        const ScoringConfig scoring;
        const auto plan = compress(trace, scoring, cfg);
        const auto segs = segment_tokens(trace);
        const auto sc = score_trace(trace, segs, scoring);
        CHECK(retention_fidelity(sc.adjusted, plan.retained, cfg.budget) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("needle recall") {
    const NeedleSpan needle{10, 8};
    CHECK(needle_recall(Indices{10, 11, 12, 13, 14, 15, 16, 17, 40}, needle) == 1.0);
    CHECK(needle_recall(Indices{0, 1, 2}, needle) == 0.0);
    CHECK(needle_recall(Indices{1, 10, 12, 14, 16}, needle) == 0.5);
    CHECK_THROWS_AS(needle_recall(Indices{1}, NeedleSpan{3, 0}), MetricError);
}

TEST_CASE("block size histogram") {
    CompressionPlan plan;
    for (std::size_t g : {1u, 1u, 3u}) {
        SegmentPlan sp;
        sp.budget = 2;
        sp.block_size = g;
        plan.segments.push_back(sp);
    }
    SegmentPlan empty;
    empty.budget = 0;
    empty.block_size = 13;
    plan.segments.push_back(empty);

    const std::vector<CompressionPlan> plans{plan};
    const auto h = blocksize_histogram(plans);
    CHECK(h.counts == std::map<std::size_t, std::size_t>{{1, 2}, {3, 1}});
    CHECK(h.total == 3);
    CHECK(h.mean == doctest::Approx(5.0 / 3.0));

    const std::vector<CompressionPlan> two{plan, plan};
    CHECK(blocksize_histogram(two).total == 6);
    CHECK(blocksize_histogram(std::vector<CompressionPlan>{}).mean == 0.0);
}

TEST_CASE("kv byte estimate") {
    // 16 x 32 layers x 16K tokens x 32 heads x 128 dims x fp16
    CHECK(kv_bytes_estimate(16, 32, 16384, 32, 128, 2) == 137438953472ULL);
    CHECK(kv_bytes_estimate(16, 32, 16384, 32, 128, 2) == 128ULL << 30);
    CHECK(kv_bytes_estimate(16, 32, 32768, 32, 128, 2) == 2 * kv_bytes_estimate(16, 32, 16384, 32, 128, 2));
    CHECK(kv_bytes_estimate(1, 1, 1, 1, 1, 1) == 2);
    CHECK_THROWS_AS(kv_bytes_estimate(0, 1, 1, 1, 1, 1), MetricError);
    CHECK_THROWS_AS(kv_bytes_estimate(1ULL << 40, 1ULL << 20, 16, 1, 1, 1), MetricError);
}

TEST_CASE("spearman") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    CHECK(spearman(x, std::vector<double>{10, 20, 30, 40, 50}) == doctest::Approx(1.0));
    CHECK(spearman(x, std::vector<double>{5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(spearman(x, std::vector<double>{1, 1, 1, 1, 1}) == 0.0);
    // one adjacent swap among six points: 1 - 6*2/(6*35)
    CHECK(spearman(std::vector<double>{1, 2, 3, 4, 5, 6}, std::vector<double>{1, 2, 4, 3, 5, 6}) ==
          doctest::Approx(1.0 - 12.0 / 210.0));
    CHECK_THROWS_AS(spearman(x, std::vector<double>{1}), MetricError);
}

TEST_CASE("metric report rendering") {
    MetricReport r;
    r.title = "demo";
    r.values["fidelity"] = 0.5;
    r.values["needle_recall"] = 1.0;
    const auto j = r.to_json();
    CHECK(j["metrics"]["fidelity"] == 0.5);
    const auto text = r.to_text();
    CHECK(text.find("needle_recall") != std::string::npos);
    CHECK(text.find("fidelity     ") != std::string::npos);
}
