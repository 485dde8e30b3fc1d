// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "sablock/trace.hpp"

namespace sablock {

/// Parameters of a desk-scale synthetic attention trace.
///
/// Compressible-token weights are log-normal with sigma `skew` (the normal
/// draw is clipped to +-3 sigma, which bounds the natural max/median ratio by
/// exp(3 * skew)); each attention row multiplies those weights by uniform
/// noise in [0.5, 1.5) and is renormalized to sum to one.
///
/// When a needle is requested it is planted as its own sentence: the tokens
/// directly before and after the span are delimiters, and its column mass is
/// raised until it is at least `needle_boost` times the median non-needle
/// column mass.
struct SyntheticSpec {
    std::size_t total_tokens = 2000;  // compressible length T
    std::size_t num_heads = 4;
    std::size_t window = 8;
    std::optional<NeedleSpan> needle;
    double needle_boost = 50.0;
    double punctuation_period = 8.0;  // mean tokens per delimiter; 0 disables
    double skew = 1.0;
    std::uint64_t seed = 0;
};

/// Throws SpecError when the spec is inconsistent (needle out of range,
/// non-positive sizes, period in (0, 1), ...).
void validate_spec(const SyntheticSpec& spec);

AttentionTrace generate_synthetic(const SyntheticSpec& spec);

}  // namespace sablock
