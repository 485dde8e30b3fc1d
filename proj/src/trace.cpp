// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#include "sablock/trace.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sablock/errors.hpp"
#include "sablock/json_io.hpp"

namespace sablock {

namespace {

using nlohmann::json;

std::string index_path(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

std::size_t read_count(const json& doc, const char* key) {
    if (!doc.contains(key)) {
        throw ValidationError(key, "missing field");
    }
    const auto& v = doc.at(key);
    if (!v.is_number_integer()) {
        throw ValidationError(key, "expected an integer");
    }
    if (v.get<std::int64_t>() < 0) {
        throw ValidationError(key, "must be non-negative");
    }
    return v.get<std::size_t>();
}

const json& expect_array(const json& v, const std::string& path, std::size_t expected_len) {
    if (!v.is_array()) {
        throw ValidationError(path, "expected an array");
    }
    if (v.size() != expected_len) {
        throw ValidationError(path, "expected " + std::to_string(expected_len) + " entries, found " +
                                        std::to_string(v.size()));
    }
    return v;
}

}  // namespace

void validate_trace(const AttentionTrace& trace) {
    if (trace.num_heads == 0) {
        throw ValidationError("num_heads", "must be at least 1");
    }
    if (trace.window == 0) {
        throw ValidationError("window", "must be at least 1");
    }
    if (trace.tokens.size() <= trace.window) {
        throw ValidationError("window", "window (" + std::to_string(trace.window) +
                                            ") must be smaller than the token count (" +
                                            std::to_string(trace.tokens.size()) + ")");
    }
    const std::size_t T = trace.compressible_length();
    const std::size_t expected = trace.num_heads * trace.window * T;
    if (trace.attention.size() != expected) {
        throw ValidationError("attention", "expected " + std::to_string(expected) + " values, found " +
                                               std::to_string(trace.attention.size()));
    }
    for (std::size_t h = 0; h < trace.num_heads; ++h) {
        for (std::size_t q = 0; q < trace.window; ++q) {
            for (std::size_t t = 0; t < T; ++t) {
                const double v = trace.at(h, q, t);
                if (!std::isfinite(v) || v < 0.0) {
                    throw ValidationError("attention[" + std::to_string(h) + "][" + std::to_string(q) + "][" +
                                              std::to_string(t) + "]",
                                          std::isfinite(v) ? "negative attention weight"
                                                           : "non-finite attention weight");
                }
            }
        }
    }
    if (trace.needle) {
        if (trace.needle->length == 0 || trace.needle->end() > T) {
            throw ValidationError("needle", "span must be non-empty and lie within the compressible region");
        }
    }
}

json trace_to_json(const AttentionTrace& trace) {
    json doc;
    doc["version"] = 1;
    doc["num_heads"] = trace.num_heads;
    doc["window"] = trace.window;

    json tokens = json::array();
    for (const auto& tok : trace.tokens) {
        json entry{{"text", tok.text}};
        if (tok.offset) {
            entry["offset"] = *tok.offset;
        }
        tokens.push_back(std::move(entry));
    }
    doc["tokens"] = std::move(tokens);

    const std::size_t T = trace.compressible_length();
    json heads = json::array();
    for (std::size_t h = 0; h < trace.num_heads; ++h) {
        json rows = json::array();
        for (std::size_t q = 0; q < trace.window; ++q) {
            const auto first = trace.attention.begin() + static_cast<std::ptrdiff_t>((h * trace.window + q) * T);
            rows.push_back(json(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(T))));
        }
        heads.push_back(std::move(rows));
    }
    doc["attention"] = std::move(heads);

    if (trace.needle) {
        doc["needle"] = {{"start", trace.needle->start}, {"len", trace.needle->length}};
    }
    return doc;
}

AttentionTrace trace_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("$", "trace document must be a JSON object");
    }
    if (!doc.contains("version") || doc.at("version") != 1) {
        throw ValidationError("version", "unsupported or missing version (expected 1)");
    }

    AttentionTrace trace;
    trace.num_heads = read_count(doc, "num_heads");
    trace.window = read_count(doc, "window");
    if (trace.num_heads == 0) {
        throw ValidationError("num_heads", "must be at least 1");
    }
    if (trace.window == 0) {
        throw ValidationError("window", "must be at least 1");
    }

    if (!doc.contains("tokens") || !doc.at("tokens").is_array()) {
        throw ValidationError("tokens", "expected an array");
    }
    const auto& tokens = doc.at("tokens");
    trace.tokens.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& entry = tokens[i];
        const auto path = index_path("tokens", i);
        if (!entry.is_object() || !entry.contains("text") || !entry.at("text").is_string()) {
            throw ValidationError(path, "expected an object with a string \"text\"");
        }
        Token tok{entry.at("text").get<std::string>(), std::nullopt};
        if (entry.contains("offset")) {
            const auto& off = entry.at("offset");
            if (!off.is_number_unsigned() && !(off.is_number_integer() && off.get<std::int64_t>() >= 0)) {
                throw ValidationError(path + ".offset", "expected a non-negative integer");
            }
            tok.offset = off.get<std::uint64_t>();
        }
        trace.tokens.push_back(std::move(tok));
    }
    if (trace.tokens.size() <= trace.window) {
        throw ValidationError("window", "window (" + std::to_string(trace.window) +
                                            ") must be smaller than the token count (" +
                                            std::to_string(trace.tokens.size()) + ")");
    }

    const std::size_t T = trace.compressible_length();
    if (!doc.contains("attention")) {
        throw ValidationError("attention", "missing field");
    }
    const auto& heads = expect_array(doc.at("attention"), "attention", trace.num_heads);
    trace.attention.reserve(trace.num_heads * trace.window * T);
    for (std::size_t h = 0; h < trace.num_heads; ++h) {
        const auto hpath = index_path("attention", h);
        const auto& rows = expect_array(heads[h], hpath, trace.window);
        for (std::size_t q = 0; q < trace.window; ++q) {
            const auto qpath = index_path(hpath, q);
            const auto& row = expect_array(rows[q], qpath, T);
            for (std::size_t t = 0; t < T; ++t) {
                const auto& v = row[t];
                if (!v.is_number()) {
                    throw ValidationError(index_path(qpath, t), "expected a number");
                }
                const double x = v.get<double>();
                if (!std::isfinite(x)) {
                    throw ValidationError(index_path(qpath, t), "non-finite attention weight");
                }
                if (x < 0.0) {
                    throw ValidationError(index_path(qpath, t), "negative attention weight");
                }
                trace.attention.push_back(x);
            }
        }
    }

    if (doc.contains("needle") && !doc.at("needle").is_null()) {
        const auto& n = doc.at("needle");
        if (!n.is_object()) {
            throw ValidationError("needle", "expected an object");
        }
        trace.needle = NeedleSpan{read_count(n, "start"), read_count(n, "len")};
    }

    validate_trace(trace);
    return trace;
}

AttentionTrace parse_trace(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed trace JSON: ") + e.what());
    }
    return trace_from_json(doc);
}

std::string serialize_trace(const AttentionTrace& trace) {
    return trace_to_json(trace).dump();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("failed reading " + path);
    }
    return buf.str();
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("failed writing " + path);
    }
}

AttentionTrace load_trace(const std::string& path) {
    return parse_trace(read_file(path));
}

void save_trace(const AttentionTrace& trace, const std::string& path) {
    validate_trace(trace);
    write_file(path, serialize_trace(trace));
}

}  // namespace sablock
