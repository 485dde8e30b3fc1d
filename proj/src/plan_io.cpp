// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#include "sablock/plan_io.hpp"

#include <algorithm>

#include "sablock/errors.hpp"
#include "sablock/json_io.hpp"

namespace sablock {

namespace {

using nlohmann::json;

std::vector<TokenIndex> sorted(std::vector<TokenIndex> v) {
    std::sort(v.begin(), v.end());
    return v;
}

template <typename T>
T field(const json& doc, const char* key, const std::string& where) {
    if (!doc.contains(key)) {
        throw ValidationError(where + "." + key, "missing field");
    }
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(where + "." + key, e.what());
    }
}

}  // namespace

json config_to_json(const ScoringConfig& scoring, const SearchConfig& search, const SegmentationConfig& segmentation) {
    return json{
        {"alpha", scoring.alpha},
        {"eta", scoring.eta},
        {"epsilon", scoring.epsilon},
        {"tau", search.tau},
        {"g_max", search.g_max},
        {"ladder", search.ladder},
        {"dense_range", search.dense_range},
        {"delimiters", segmentation.delimiters},
        {"max_seg_len", segmentation.max_len},
    };
}

json plan_to_json(const CompressionPlan& plan) {
    json segments = json::array();
    for (const auto& sp : plan.segments) {
        segments.push_back(json{
            {"start", sp.segment.start},
            {"end", sp.segment.end},
            {"budget", sp.budget},
            {"block_size", sp.block_size},
            {"fidelity", sp.fidelity},
            {"retained", sorted(sp.retained)},
        });
    }
    return json{
        {"version", 1},
        {"budget", plan.budget},
        {"retained", sorted(plan.retained)},
        {"window_tokens", sorted(plan.window_tokens)},
        {"segments", std::move(segments)},
        {"config", config_to_json(plan.scoring, plan.search, plan.segmentation)},
    };
}

CompressionPlan plan_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("$", "plan document must be a JSON object");
    }
    if (!doc.contains("version") || doc.at("version") != 1) {
        throw ValidationError("version", "unsupported or missing version (expected 1)");
    }
    CompressionPlan plan;
    plan.budget = field<std::size_t>(doc, "budget", "$");
    plan.retained = field<std::vector<TokenIndex>>(doc, "retained", "$");
    plan.window_tokens = field<std::vector<TokenIndex>>(doc, "window_tokens", "$");

    if (!doc.contains("segments") || !doc.at("segments").is_array()) {
        throw ValidationError("segments", "expected an array");
    }
    const auto& segs = doc.at("segments");
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const auto where = "segments[" + std::to_string(k) + "]";
        const auto& s = segs[k];
        SegmentPlan sp;
        sp.segment = Segment{k, field<TokenIndex>(s, "start", where), field<TokenIndex>(s, "end", where)};
        sp.budget = field<std::size_t>(s, "budget", where);
        sp.block_size = field<std::size_t>(s, "block_size", where);
        sp.fidelity = field<double>(s, "fidelity", where);
        if (s.contains("retained")) {
            sp.retained = field<std::vector<TokenIndex>>(s, "retained", where);
        }
        plan.segments.push_back(std::move(sp));
    }

    if (doc.contains("config")) {
        const auto& c = doc.at("config");
        plan.scoring.alpha = field<double>(c, "alpha", "config");
        plan.scoring.eta = field<double>(c, "eta", "config");
        plan.scoring.epsilon = field<double>(c, "epsilon", "config");
        plan.search.budget = plan.budget;
        plan.search.tau = field<double>(c, "tau", "config");
        plan.search.g_max = field<std::size_t>(c, "g_max", "config");
        plan.search.ladder = field<std::vector<std::size_t>>(c, "ladder", "config");
        plan.search.dense_range = field<bool>(c, "dense_range", "config");
        plan.segmentation.delimiters = field<std::string>(c, "delimiters", "config");
        plan.segmentation.max_len = field<std::size_t>(c, "max_seg_len", "config");
    }
    return plan;
}

void validate_plan(const CompressionPlan& plan, const AttentionTrace& trace) {
    const std::size_t T = trace.compressible_length();
    if (plan.budget < 1 || plan.retained.empty()) {
        throw ValidationError("retained", "plan retains no tokens (budget must be at least 1)");
    }
    for (std::size_t i = 0; i < plan.retained.size(); ++i) {
        if (plan.retained[i] >= T) {
            throw ValidationError("retained[" + std::to_string(i) + "]",
                                  "index " + std::to_string(plan.retained[i]) + " outside [0, " + std::to_string(T) + ")");
        }
    }
    for (std::size_t i = 0; i < plan.window_tokens.size(); ++i) {
        const auto w = plan.window_tokens[i];
        if (w < T || w >= trace.tokens.size()) {
            throw ValidationError("window_tokens[" + std::to_string(i) + "]",
                                  "index " + std::to_string(w) + " is not an observation-window token");
        }
    }
    for (std::size_t k = 0; k < plan.segments.size(); ++k) {
        const auto& seg = plan.segments[k].segment;
        if (seg.start >= seg.end || seg.end > T) {
            throw ValidationError("segments[" + std::to_string(k) + "]", "span outside the compressible region");
        }
    }
}

std::string write_plan(const CompressionPlan& plan, const AttentionTrace& trace) {
    validate_plan(plan, trace);
    return plan_to_json(plan).dump(2);
}

CompressionPlan read_plan(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed plan JSON: ") + e.what());
    }
    return plan_from_json(doc);
}

}  // namespace sablock
