// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Every instance is drawn from a fixed seed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "sablock/blocksearch.hpp"
#include "sablock/metrics.hpp"
#include "sablock/policies.hpp"
#include "sablock/scoring.hpp"
#include "sablock/segment.hpp"
#include "sablock/synthetic.hpp"
#include "test_support.hpp"

using namespace sablock;
using Indices = std::vector<TokenIndex>;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit_s;  // 0: no limit
    std::function<Outcome()> run;
};

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << v;
    return s.str();
}

// Draws shape parameters in a fixed order (argument evaluation order is not).
AttentionTrace draw_trace(std::mt19937_64& rng, std::size_t T, std::size_t max_heads, std::size_t max_window,
                          bool integer_valued, double zero_fraction = 0.05) {
    const std::size_t heads = uniform(rng, 1, max_heads);
    const std::size_t window = uniform(rng, 1, max_window);
    const double p_delim = uniform_real(rng, 0.0, 0.4);
    return testing::random_trace(rng, T, heads, window, p_delim, integer_valued, zero_fraction);
}

Indices to_vec(const oracle::IndexSet& s) { return Indices(s.begin(), s.end()); }

// Corpus shared by the delimiter-structure criteria.
const std::vector<AttentionTrace>& punctuated_corpus() {
    static const std::vector<AttentionTrace> corpus = [] {
        std::vector<AttentionTrace> out;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            SyntheticSpec spec;
            spec.total_tokens = 2000;
            spec.punctuation_period = 8;
            spec.seed = seed;
            out.push_back(generate_synthetic(spec));
        }
        return out;
    }();
    return corpus;
}

// ---------------------------------------------------------------------------

Outcome exact_budget() {
    std::mt19937_64 rng(101);
    std::size_t violations = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t T = uniform(rng, 1, 500);
        const auto trace = draw_trace(rng, T, 4, 8, i % 5 == 0);
        ScoringConfig scoring;
        scoring.alpha = uniform_real(rng, 0.0, 2.0);
        scoring.eta = uniform_real(rng, 0.0, 2.0);
        SearchConfig search;
        search.budget = uniform(rng, 1, 600);
        search.tau = uniform_real(rng, 0.01, 1.0);
        search.g_max = uniform(rng, 1, 16);
        search.dense_range = i % 3 == 0;
        SegmentationConfig seg;
        seg.max_len = uniform(rng, 1, 300);
        const auto plan = compress(trace, scoring, search, seg);
        if (plan.retained.size() != std::min(search.budget, T)) {
            ++violations;
        }
    }
    return {violations == 0, "1000 tuples, " + std::to_string(violations) + " budget violations"};
}

std::vector<std::size_t> random_ladder(std::mt19937_64& rng) {
    std::vector<std::size_t> ladder{1};
    for (std::size_t g = 2; g <= 15; ++g) {
        if (std::bernoulli_distribution(0.4)(rng)) {
            ladder.push_back(g);
        }
    }
    return ladder;
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(202);
    std::size_t mismatches = 0;
    std::size_t segments_checked = 0;
    for (int i = 0; i < 500; ++i) {
        const std::size_t T = uniform(rng, 1, 30);
        const auto trace = draw_trace(rng, T, 3, 4, i % 4 == 0);
        SegmentationConfig segcfg;
        segcfg.max_len = uniform(rng, 1, 30);
        const auto segments = segment_tokens(trace, segcfg);
        const double alpha = uniform_real(rng, 0, 2);
        const double eta = uniform_real(rng, 0, 2);
        const auto scores = score_trace(trace, segments, ScoringConfig{alpha, eta, 1e-6});
        const auto& s = scores.adjusted;

        SearchConfig cfg;
        cfg.budget = uniform(rng, 1, T + 5);
        cfg.tau = uniform_real(rng, 0.3, 1.0);
        cfg.g_max = uniform(rng, 1, 15);
        switch (i % 3) {
            case 0: cfg.ladder = kDefaultLadder; break;
            case 1: cfg.dense_range = true; break;
            default: cfg.ladder = random_ladder(rng); break;
        }
        const auto plan = plan_from_scores(s, segments, cfg);

        const auto top = oracle::top_k(s, 0, T, std::min(cfg.budget, T));
        oracle::IndexSet all;
        for (std::size_t k = 0; k < segments.size(); ++k) {
            const auto& seg = segments[k];
            oracle::IndexSet base;
            for (auto t : top) {
                if (seg.contains(t)) {
                    base.insert(t);
                }
            }
            const auto cands = oracle::candidates(cfg.ladder, cfg.dense_range, seg.size(), base.size(), cfg.g_max);
            const auto d = oracle::decide(s, seg.start, seg.end, base.size(), base, cands, cfg.tau);
            const auto& got = plan.segments[k];
            if (got.budget != base.size() || got.block_size != d.g || got.retained != to_vec(d.retained)) {
                ++mismatches;
            }
            all.insert(d.retained.begin(), d.retained.end());
            ++segments_checked;
        }
        if (plan.retained != to_vec(all)) {
            ++mismatches;
        }
    }
    return {mismatches == 0, "500 instances, " + std::to_string(segments_checked) + " segments, " +
                                 std::to_string(mismatches) + " mismatches"};
}

Outcome termination_floor() {
    std::mt19937_64 rng(303);
    std::size_t checked = 0;
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const std::size_t T = uniform(rng, 1, 400);
        const auto trace = draw_trace(rng, T, 4, 8, i % 4 == 0);
        const auto segments = segment_tokens(trace);
        const auto scores = score_trace(trace, segments);
        const auto& s = scores.adjusted;
        const auto top = select_top_b(s, uniform(rng, 1, T));
        const auto budgets = implicit_budgets(top, segments);
        for (std::size_t k = 0; k < segments.size(); ++k) {
            if (budgets[k] == 0) {
                continue;
            }
            Indices base;
            for (auto t : top) {
                if (segments[k].contains(t)) {
                    base.push_back(t);
                }
            }
            const auto cover = cover_segment(s, segments[k], budgets[k], 1);
            worst = std::max(worst, std::abs(fidelity_ratio(s, cover, base) - 1.0));
            ++checked;
        }
    }
    std::ostringstream d;
    d << checked << " segments, max |R(1) - 1| = " << worst;
    return {checked > 0 && worst <= 1e-12, d.str()};
}

Outcome order_preservation() {
    std::mt19937_64 rng(404);
    std::size_t violations = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t T = uniform(rng, 1, 300);
        const auto trace = draw_trace(rng, T, 4, 8, i % 3 == 0);
        const auto segments = segment_tokens(trace);
        const double alpha = uniform_real(rng, 0, 3);
        const double eta = uniform_real(rng, 0, 3);
        const auto scores = score_trace(trace, segments, ScoringConfig{alpha, eta, 1e-6});
        for (const auto& seg : segments) {
            auto argsort = [&](const std::vector<double>& v) {
                Indices idx(seg.size());
                std::iota(idx.begin(), idx.end(), seg.start);
                std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
                return idx;
            };
            if (argsort(scores.raw) != argsort(scores.adjusted)) {
                ++violations;
                break;
            }
        }
    }
    return {violations == 0, "1000 cases, " + std::to_string(violations) + " violations"};
}

// Set equality needs tie-free scores: with exact ties (including all-zero
// columns) a larger block can reach R = 1 with a different, equally heavy set,
// and the search prefers the larger block. Traces with ties are therefore held
// to retained-mass equality instead.
Outcome reduction_identities() {
    std::mt19937_64 rng(505);
    std::size_t set_failures = 0;
    std::size_t mass_failures = 0;
    for (int i = 0; i < 250; ++i) {
        const bool ties = i >= 200;
        const std::size_t T = uniform(rng, 1, 400);
        const auto trace = draw_trace(rng, T, 4, 8, ties, ties ? 0.05 : 0.0);
        const std::size_t B = uniform(rng, 1, T + 10);
        SearchConfig search;
        search.budget = B;
        search.tau = 1.0;
        const auto sab = evict_sablock(trace, ScoringConfig{0.0, 0.0, 1e-6}, search);
        const auto topk = evict_window_topk(trace, B);
        const auto fixed1 = evict_fixed_block(trace, B, 1);
        if (!ties) {
            set_failures += (sab.retained != topk.retained || topk.retained != fixed1.retained) ? 1 : 0;
        } else {
            const auto raw = window_scores(head_mean(trace));
            auto mass = [&](const Indices& r) {
                double m = 0.0;
                for (auto t : r) {
                    m += raw[t];
                }
                return m;
            };
            mass_failures += (mass(sab.retained) != mass(topk.retained) || topk.retained != fixed1.retained) ? 1 : 0;
        }
    }
    return {set_failures == 0 && mass_failures == 0,
            "200 tie-free traces, " + std::to_string(set_failures) + " set mismatches; 50 tie-heavy traces, " +
                std::to_string(mass_failures) + " mass mismatches"};
}

const std::vector<std::size_t> kSweepG{1, 3, 5, 7, 9};

Outcome cross_sentence_trend() {
    const auto& corpus = punctuated_corpus();
    std::vector<double> mean(kSweepG.size(), 0.0);
    for (const auto& trace : corpus) {
        const auto segments = segment_tokens(trace);
        for (std::size_t i = 0; i < kSweepG.size(); ++i) {
            mean[i] += cross_sentence_rate(segments, kSweepG[i], trace.compressible_length());
        }
    }
    bool ok = true;
    std::ostringstream d;
    d << "100 traces, rate@g{1,3,5,7,9} =";
    for (std::size_t i = 0; i < mean.size(); ++i) {
        mean[i] /= static_cast<double>(corpus.size());
        d << ' ' << fmt(mean[i]);
        if (i > 0 && !(mean[i] > mean[i - 1])) {
            ok = false;
        }
    }
    return {ok && mean[0] == 0.0, d.str()};
}

Outcome redundancy_trend() {
    constexpr std::size_t kBudget = 96;
    const auto& corpus = punctuated_corpus();
    std::vector<double> mean(kSweepG.size(), 0.0);
    for (const auto& trace : corpus) {
        const auto raw = window_scores(head_mean(trace));
        for (std::size_t i = 0; i < kSweepG.size(); ++i) {
            mean[i] += redundancy_rate(raw, evict_fixed_block(trace, kBudget, kSweepG[i]).retained, kBudget);
        }
    }
    bool ok = true;
    std::ostringstream d;
    d << "100 traces, B=96, redundancy@g{1,3,5,7,9} =";
    for (std::size_t i = 0; i < mean.size(); ++i) {
        mean[i] /= static_cast<double>(corpus.size());
        d << ' ' << fmt(mean[i]);
        if (i > 0 && mean[i] < mean[i - 1]) {
            ok = false;
        }
    }
    return {ok && mean[0] == 0.0, d.str()};
}

Outcome blocksize_budget_trend() {
    std::vector<AttentionTrace> corpus;
    for (std::uint64_t seed = 1000; seed < 1050; ++seed) {
        SyntheticSpec spec;
        spec.total_tokens = 2000;
        spec.seed = seed;
        corpus.push_back(generate_synthetic(spec));
    }
    const std::vector<std::size_t> budgets{16, 32, 64, 128, 256, 512};
    std::vector<double> x, y;
    std::ostringstream d;
    d << "50 traces, mean block size =";
    for (auto B : budgets) {
        SearchConfig search;
        search.budget = B;
        std::vector<CompressionPlan> plans;
        for (const auto& trace : corpus) {
            plans.push_back(compress(trace, ScoringConfig{}, search));
        }
        const auto hist = blocksize_histogram(plans);
        x.push_back(static_cast<double>(B));
        y.push_back(hist.mean);
        d << ' ' << fmt(hist.mean, 3);
    }
    const double rho = spearman(x, y);
    d << ", spearman = " << fmt(rho);
    return {rho > 0.8, d.str()};
}

Outcome needle_retention() {
    constexpr std::size_t kBudget = 96;
    constexpr std::size_t kLen = 8;
    constexpr std::size_t kT = 2000;
    double sab_total = 0.0, chunk_total = 0.0, stream_total = 0.0;
    std::size_t dominated = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 placement(seed * 7919 + 17);
        SyntheticSpec spec;
        spec.total_tokens = kT;
        spec.seed = seed;
        spec.needle_boost = 50.0;
        spec.needle = NeedleSpan{uniform(placement, 1, kT - kLen - 1), kLen};
        const auto trace = generate_synthetic(spec);

        PolicyOptions options;
        const double sab = needle_recall(run_policy("sablock", trace, kBudget, options).retained, *trace.needle);
        const double chunk = needle_recall(run_policy("chunkkv:7", trace, kBudget, options).retained, *trace.needle);
        const double stream = needle_recall(run_policy("streaming", trace, kBudget, options).retained, *trace.needle);
        sab_total += sab;
        chunk_total += chunk;
        stream_total += stream;
        if (sab < chunk || sab < stream) {
            ++dominated;
        }
    }
    const double sab_mean = sab_total / 100.0;
    std::ostringstream d;
    d << "100 seeds, mean recall sablock " << fmt(sab_mean) << ", chunkkv:7 " << fmt(chunk_total / 100.0)
      << ", streaming " << fmt(stream_total / 100.0) << ", seeds where sablock trails: " << dominated;
    return {sab_mean >= 0.99 && dominated == 0, d.str()};
}

Outcome kv_bytes() {
    const std::uint64_t got = kv_bytes_estimate(16, 32, 16384, 32, 128, 2);
    const std::uint64_t want = 2ULL * 16 * 32 * 16384 * 32 * 128 * 2;
    return {got == want && got == (128ULL << 30), std::to_string(got) + " bytes = " + std::to_string(got >> 30) + " GiB"};
}

Outcome out_of_scope() {
    return {true,
            "informational: benchmark task scores, attention heatmaps and GPU memory/latency need real model "
            "inference and are not reproduced; criteria 1-9 stand in for them"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "exact budget", 10.0, exact_budget},
        {2, "oracle equivalence of block search", 30.0, oracle_equivalence},
        {3, "token-level fallback keeps full fidelity", 0.0, termination_floor},
        {4, "within-segment order preservation", 0.0, order_preservation},
        {5, "reduction identities", 0.0, reduction_identities},
        {6, "cross-sentence rate grows with block size", 0.0, cross_sentence_trend},
        {7, "fixed-block redundancy grows with block size", 0.0, redundancy_trend},
        {8, "block size grows with budget", 120.0, blocksize_budget_trend},
        {9, "needle retention", 0.0, needle_retention},
        {10, "KV byte estimate", 0.0, kv_bytes},
        {11, "out-of-scope results", 0.0, out_of_scope},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
            o.pass = false;
            o.detail += " [over the " + fmt(c.time_limit_s, 0) + " s limit]";
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail << " ("
                  << fmt(secs, 2) << " s)" << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
