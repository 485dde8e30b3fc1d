// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#include "sablock/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sablock/errors.hpp"

namespace sablock {

namespace {

constexpr std::array<const char*, 24> kVocabulary = {
    " the",   " of",    " and",   " a",     " to",    " in",     " river", " city",
    " was",   " he",    " she",   " built", " over",  " many",   " years", " market",
    " north", " bread", " light", " stone", " small", " island", " road",  " winter",
};

constexpr std::array<const char*, 8> kNeedleWords = {
    " The", " secret", " code", " is", " seven", " four", " two", " nine",
};

constexpr std::array<const char*, 8> kQuestionWords = {
    " What", " is", " the", " secret", " code", " ?", " Answer", ":",
};

// Distributions are derived from the raw engine output by hand so that a seed
// produces the same trace regardless of the standard library in use.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : m_engine(seed) {}

    // [0, 1)
    double uniform() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }

    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(m_engine() % n); }

private:
    std::mt19937_64 m_engine;
};

double median(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (values.size() % 2 == 1) {
        return *mid;
    }
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

// Fills trace.attention from per-token weights and per-entry noise, then
// renormalizes every (head, query) row to sum to one.
void build_rows(AttentionTrace& trace, const std::vector<double>& weights, const std::vector<double>& noise) {
    const std::size_t T = weights.size();
    const std::size_t rows = trace.num_heads * trace.window;
    trace.attention.assign(rows * T, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const double v = weights[t] * noise[r * T + t];
            trace.attention[r * T + t] = v;
            sum += v;
        }
        if (sum > 0.0) {
            for (std::size_t t = 0; t < T; ++t) {
                trace.attention[r * T + t] /= sum;
            }
        }
    }
}

std::vector<double> column_masses(const AttentionTrace& trace) {
    const std::size_t T = trace.compressible_length();
    const std::size_t rows = trace.num_heads * trace.window;
    std::vector<double> mass(T, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t t = 0; t < T; ++t) {
            mass[t] += trace.attention[r * T + t];
        }
    }
    return mass;
}

}  // namespace

void validate_spec(const SyntheticSpec& spec) {
    if (spec.total_tokens == 0) {
        throw SpecError("total_tokens must be positive");
    }
    if (spec.num_heads == 0 || spec.window == 0) {
        throw SpecError("num_heads and window must be positive");
    }
    if (!(spec.needle_boost > 0.0) || !std::isfinite(spec.needle_boost)) {
        throw SpecError("needle_boost must be a positive finite number");
    }
    if (!std::isfinite(spec.punctuation_period) ||
        (spec.punctuation_period != 0.0 && spec.punctuation_period < 1.0)) {
        throw SpecError("punctuation_period must be 0 (no delimiters) or >= 1");
    }
    if (!(spec.skew >= 0.0) || !std::isfinite(spec.skew)) {
        throw SpecError("skew must be a non-negative finite number");
    }
    if (spec.needle) {
        if (spec.needle->length == 0) {
            throw SpecError("needle length must be positive");
        }
        if (spec.needle->start >= spec.total_tokens || spec.needle->length > spec.total_tokens - spec.needle->start) {
            throw SpecError("needle span [" + std::to_string(spec.needle->start) + ", " +
                            std::to_string(spec.needle->start + spec.needle->length) +
                            ") lies outside the compressible region [0, " + std::to_string(spec.total_tokens) + ")");
        }
    }
}

AttentionTrace generate_synthetic(const SyntheticSpec& spec) {
    validate_spec(spec);

    Rng rng(spec.seed);
    const std::size_t T = spec.total_tokens;

    AttentionTrace trace;
    trace.num_heads = spec.num_heads;
    trace.window = spec.window;
    trace.needle = spec.needle;
    trace.tokens.reserve(T + spec.window);

    const double delimiter_prob = spec.punctuation_period > 0.0 ? 1.0 / spec.punctuation_period : 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const bool delimiter = rng.uniform() < delimiter_prob;
        const std::size_t word = rng.below(kVocabulary.size());
        trace.tokens.push_back(Token{delimiter ? "." : kVocabulary[word], std::nullopt});
    }
    for (std::size_t q = 0; q < spec.window; ++q) {
        trace.tokens.push_back(Token{kQuestionWords[q % kQuestionWords.size()], std::nullopt});
    }

    std::vector<double> weights(T);
    for (auto& w : weights) {
        const double z = std::clamp(rng.normal(), -3.0, 3.0);
        w = std::exp(spec.skew * z);
    }

    const std::size_t rows = spec.num_heads * spec.window;
    std::vector<double> noise(rows * T);
    for (auto& n : noise) {
        n = 0.5 + rng.uniform();
    }

    if (!spec.needle) {
        build_rows(trace, weights, noise);
        return trace;
    }

    const NeedleSpan needle = *spec.needle;
    for (std::size_t i = 0; i < needle.length; ++i) {
        trace.tokens[needle.start + i].text = kNeedleWords[i % kNeedleWords.size()];
    }
    if (needle.start > 0) {
        trace.tokens[needle.start - 1].text = ".";
    }
    if (needle.end() < T) {
        trace.tokens[needle.end()].text = ".";
    }

    const double base = median(weights);
    for (std::size_t t = needle.start; t < needle.end(); ++t) {
        weights[t] = 2.0 * spec.needle_boost * base;
    }
    build_rows(trace, weights, noise);
    if (needle.length == T) {
        return trace;
    }

    // Renormalization shifts every column, so raise the needle until the
    // column-mass guarantee holds.
    for (int iter = 0; iter < 64; ++iter) {
        const auto mass = column_masses(trace);
        std::vector<double> others;
        others.reserve(T - needle.length);
        double weakest = mass[needle.start];
        for (std::size_t t = 0; t < T; ++t) {
            if (needle.contains(t)) {
                weakest = std::min(weakest, mass[t]);
            } else {
                others.push_back(mass[t]);
            }
        }
        const double required = spec.needle_boost * median(std::move(others));
        if (weakest >= required) {
            return trace;
        }
        const double scale = weakest > 0.0 ? 1.05 * required / weakest : 2.0;
        for (std::size_t t = needle.start; t < needle.end(); ++t) {
            weights[t] *= scale;
        }
        build_rows(trace, weights, noise);
    }
    throw SpecError("could not reach needle_boost " + std::to_string(spec.needle_boost) +
                    "; the needle occupies too much of the region");
}

}  // namespace sablock
