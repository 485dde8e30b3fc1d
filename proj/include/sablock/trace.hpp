// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sablock {

using TokenIndex = std::size_t;

struct Token {
    std::string text;
    std::optional<std::uint64_t> offset;  // byte offset into the source text

    bool operator==(const Token&) const = default;
};

/// Contiguous span of compressible tokens holding a planted retrieval target.
struct NeedleSpan {
    TokenIndex start = 0;
    std::size_t length = 0;

    TokenIndex end() const { return start + length; }
    bool contains(TokenIndex t) const { return t >= start && t < end(); }
    bool operator==(const NeedleSpan&) const = default;
};

/// Window attention of one layer's head group.
///
/// The last `window` tokens form the observation window and are never
/// evicted; the first T = tokens.size() - window tokens are the compressible
/// region. `attention` is stored row-major as [num_heads][window][T], so the
/// weight from window query q (head h) to compressible key t is
/// attention[(h * window + q) * T + t].
///
/// The struct is a plain aggregate so that malformed traces can be
/// represented and rejected by validate_trace().
struct AttentionTrace {
    std::size_t num_heads = 0;
    std::size_t window = 0;
    std::vector<Token> tokens;
    std::vector<double> attention;
    std::optional<NeedleSpan> needle;

    /// Length T of the compressible region (0 when the trace is degenerate).
    std::size_t compressible_length() const {
        return tokens.size() > window ? tokens.size() - window : 0;
    }

    double at(std::size_t head, std::size_t query, TokenIndex t) const {
        return attention[(head * window + query) * compressible_length() + t];
    }

    bool operator==(const AttentionTrace&) const = default;
};

/// Throws ValidationError naming the first violated invariant.
void validate_trace(const AttentionTrace& trace);

/// Parses the JSON trace format (version 1). Throws ParseError on malformed
/// JSON and ValidationError on shape or value violations.
AttentionTrace parse_trace(std::string_view bytes);

/// Inverse of parse_trace. Doubles are written with round-trip precision.
std::string serialize_trace(const AttentionTrace& trace);

AttentionTrace load_trace(const std::string& path);
void save_trace(const AttentionTrace& trace, const std::string& path);

// Small file helpers shared by the trace and plan readers.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace sablock
