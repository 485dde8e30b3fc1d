// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// JSON document builders for the trace and plan formats. The string-level
// entry points in trace.hpp and plan_io.hpp are thin wrappers over these;
// the CLI uses them directly to attach a run manifest to each output.

#include "json.hpp"

#include "sablock/trace.hpp"

namespace sablock {

nlohmann::json trace_to_json(const AttentionTrace& trace);
AttentionTrace trace_from_json(const nlohmann::json& doc);

}  // namespace sablock

#include "sablock/blocksearch.hpp"

namespace sablock {

nlohmann::json config_to_json(const ScoringConfig& scoring, const SearchConfig& search,
                              const SegmentationConfig& segmentation);

/// Plan document without validation against a trace.
nlohmann::json plan_to_json(const CompressionPlan& plan);
CompressionPlan plan_from_json(const nlohmann::json& doc);

}  // namespace sablock
