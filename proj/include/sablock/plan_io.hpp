// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "sablock/blocksearch.hpp"
#include "sablock/trace.hpp"

namespace sablock {

/// Checks that every index in the plan is valid for the trace and that the
/// retained set is non-empty; throws ValidationError otherwise.
void validate_plan(const CompressionPlan& plan, const AttentionTrace& trace);

/// Serializes a plan as the version-1 plan document. Retained and window
/// indices are written in ascending order.
std::string write_plan(const CompressionPlan& plan, const AttentionTrace& trace);

/// Reads a plan document back. Unknown top-level keys (such as an embedded
/// run manifest) are ignored.
CompressionPlan read_plan(std::string_view bytes);

}  // namespace sablock
