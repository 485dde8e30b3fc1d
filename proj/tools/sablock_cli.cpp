// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: trace generation, compression, policy comparison,
// budget sweeps and metric reports.
//
// Exit codes: 0 success, 1 I/O or input-data failure, 2 usage/config failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "sablock/blocksearch.hpp"
#include "sablock/errors.hpp"
#include "sablock/json_io.hpp"
#include "sablock/metrics.hpp"
#include "sablock/plan_io.hpp"
#include "sablock/policies.hpp"
#include "sablock/synthetic.hpp"
#include "sablock/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sablock::cli {

namespace {

constexpr const char* kToolVersion = "0.1.0";

/// Flags shared by every subcommand.
struct GlobalOptions {
    std::uint64_t seed = 0;
    double alpha = 0.9;
    double eta = 1.0;
    double epsilon = 1e-6;
    double tau = 0.85;
    std::size_t g_max = 13;
    std::string ladder = "1,2,3,5,7,9,11,13";
    bool dense_range = false;
    std::string delims = "\\n.!?;:,";
    std::size_t max_seg_len = kDefaultMaxSegmentLength;
    long long budget = 96;
    std::string out;
};

struct GenOptions {
    std::size_t tokens = 2000;
    std::size_t heads = 4;
    std::size_t window = 8;
    std::optional<long long> needle_at;
    bool needle_random = false;
    std::size_t needle_len = 8;
    double needle_boost = 50.0;
    double period = 8.0;
    double skew = 1.0;
    std::size_t count = 1;
};

struct CompressOptions {
    std::string trace;
};

struct CompareOptions {
    std::string trace;
    std::string policies;
    std::string format = "text";
    std::size_t n_init = 4;
};

struct SweepOptions {
    std::string corpus;
    std::string budgets = "16,32,64,128,256,512";
    std::string policies = "sablock";
    std::size_t n_init = 4;
};

struct MetricsOptions {
    std::string trace;
    std::string plan;
    std::string block_sizes = "1,3,5,7,9";
    std::string kv;
    std::string format = "text";
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& s, const std::string& what) {
    std::vector<std::size_t> out;
    for (const auto& item : split(s, ',')) {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != item.size() || v < 1) {
            throw ConfigError(what + ": '" + item + "' is not a positive integer");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) {
        throw ConfigError(what + " is empty");
    }
    return out;
}

std::string unescape(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            const char c = s[++i];
            out += c == 'n' ? '\n' : c == 't' ? '\t' : c;
        } else {
            out += s[i];
        }
    }
    return out;
}

std::size_t resolved_budget(const GlobalOptions& g) {
    if (g.budget < 1) {
        throw ConfigError("--budget must be at least 1");
    }
    return static_cast<std::size_t>(g.budget);
}

ScoringConfig scoring_config(const GlobalOptions& g) {
    ScoringConfig cfg{g.alpha, g.eta, g.epsilon};
    validate_config(cfg);
    return cfg;
}

SearchConfig search_config(const GlobalOptions& g) {
    SearchConfig cfg;
    cfg.budget = resolved_budget(g);
    cfg.tau = g.tau;
    cfg.g_max = g.g_max;
    cfg.ladder = parse_size_list(g.ladder, "--ladder");
    cfg.dense_range = g.dense_range;
    validate_config(cfg);
    return cfg;
}

SegmentationConfig segmentation_config(const GlobalOptions& g) {
    if (g.max_seg_len < 1) {
        throw ConfigError("--max-seg-len must be at least 1");
    }
    return SegmentationConfig{unescape(g.delims), g.max_seg_len};
}

json manifest(const std::string& subcommand, const GlobalOptions& g, json extra, std::vector<std::string> inputs,
              std::vector<std::string> outputs) {
    SearchConfig search;
    search.tau = g.tau;
    search.g_max = g.g_max;
    search.dense_range = g.dense_range;
    try {
        search.ladder = parse_size_list(g.ladder, "--ladder");
    } catch (const ConfigError&) {
    }
    json config = config_to_json(ScoringConfig{g.alpha, g.eta, g.epsilon}, search,
                                 SegmentationConfig{unescape(g.delims), g.max_seg_len});
    config["budget"] = g.budget;
    for (auto& [k, v] : extra.items()) {
        config[k] = v;
    }
    return json{{"tool", "sablock"},       {"tool_version", kToolVersion}, {"subcommand", subcommand},
                {"seed", g.seed},          {"config", config},             {"inputs", inputs},
                {"outputs", outputs}};
}

std::string fixed(double v, int precision = 4) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << v;
    return s.str();
}

// ---------------------------------------------------------------------------
// gen

int cmd_gen(const GlobalOptions& g, const GenOptions& o) {
    if (g.out.empty()) {
        throw ConfigError("gen requires -o/--out");
    }
    if (o.needle_at && *o.needle_at < 0) {
        throw ConfigError("--needle-at must be >= 0");
    }
    if (o.count < 1) {
        throw ConfigError("--count must be at least 1");
    }
    const auto segmentation = segmentation_config(g);

    const bool many = o.count > 1;
    if (many) {
        fs::create_directories(g.out);
    }
    std::mt19937_64 placement(g.seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = 0; i < o.count; ++i) {
        SyntheticSpec spec;
        spec.total_tokens = o.tokens;
        spec.num_heads = o.heads;
        spec.window = o.window;
        spec.needle_boost = o.needle_boost;
        spec.punctuation_period = o.period;
        spec.skew = o.skew;
        spec.seed = g.seed + i;
        if (o.needle_at) {
            spec.needle = NeedleSpan{static_cast<std::size_t>(*o.needle_at), o.needle_len};
        } else if (o.needle_random) {
            if (o.needle_len + 2 > o.tokens) {
                throw SpecError("--needle-random needs at least needle_len + 2 tokens");
            }
            const std::size_t start = 1 + static_cast<std::size_t>(placement() % (o.tokens - o.needle_len - 1));
            spec.needle = NeedleSpan{start, o.needle_len};
        }
        const auto trace = generate_synthetic(spec);

        std::ostringstream name;
        name << "trace_" << std::setw(4) << std::setfill('0') << i << ".json";
        const std::string path = many ? (fs::path(g.out) / name.str()).string() : g.out;

        auto doc = trace_to_json(trace);
        doc["manifest"] = manifest("gen", g,
                                   json{{"tokens", o.tokens},
                                        {"heads", o.heads},
                                        {"window", o.window},
                                        {"needle", spec.needle ? json{{"start", spec.needle->start},
                                                                      {"len", spec.needle->length}}
                                                               : json(nullptr)},
                                        {"needle_boost", o.needle_boost},
                                        {"period", o.period},
                                        {"skew", o.skew},
                                        {"trace_seed", spec.seed}},
                                   {}, {path});
        write_file(path, doc.dump());

        const auto segments = segment_tokens(trace, segmentation);
        std::cout << path << ": H=" << trace.num_heads << " window=" << trace.window
                  << " T=" << trace.compressible_length() << " segments=" << segments.size();
        if (trace.needle) {
            std::cout << " needle=[" << trace.needle->start << "," << trace.needle->end() << ")";
        }
        std::cout << '\n';
        spdlog::debug("generated {} with seed {}", path, spec.seed);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// compress

int cmd_compress(const GlobalOptions& g, const CompressOptions& o) {
    const auto scoring = scoring_config(g);
    const auto search = search_config(g);
    const auto segmentation = segmentation_config(g);
    const auto trace = load_trace(o.trace);

    const auto plan = compress(trace, scoring, search, segmentation);
    const auto segments = segment_tokens(trace, segmentation);
    const auto scores = score_trace(trace, segments, scoring);
    const double fidelity = retention_fidelity(scores.adjusted, plan.retained, search.budget);

    if (!g.out.empty()) {
        validate_plan(plan, trace);
        auto doc = plan_to_json(plan);
        doc["manifest"] = manifest("compress", g, json::object(), {o.trace}, {g.out});
        write_file(g.out, doc.dump(2));
    }

    std::cout << "retained " << plan.retained.size() << " of " << trace.compressible_length()
              << " compressible tokens (+" << plan.window_tokens.size() << " window)\n";
    std::cout << "global fidelity " << fixed(fidelity, 6) << '\n';
    std::cout << std::setw(8) << "segment" << std::setw(8) << "start" << std::setw(8) << "end" << std::setw(8)
              << "budget" << std::setw(8) << "block" << std::setw(10) << "fidelity" << '\n';
    for (const auto& sp : plan.segments) {
        if (sp.budget == 0) {
            continue;
        }
        std::cout << std::setw(8) << sp.segment.index << std::setw(8) << sp.segment.start << std::setw(8)
                  << sp.segment.end << std::setw(8) << sp.budget << std::setw(8) << sp.block_size << std::setw(10)
                  << fixed(sp.fidelity) << '\n';
    }
    if (trace.needle) {
        std::cout << "needle recall " << fixed(needle_recall(plan.retained, *trace.needle)) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// compare

struct PolicyRow {
    std::string policy;
    std::size_t retained = 0;
    double fidelity = 0.0;
    double redundancy = 0.0;
    std::optional<double> needle_recall;
    std::optional<double> mean_block_size;
};

std::vector<PolicyRow> evaluate_policies(const AttentionTrace& trace, const std::vector<std::string>& policies,
                                         std::size_t budget, const PolicyOptions& options) {
    const auto segments = segment_tokens(trace, options.segmentation);
    const auto scores = score_trace(trace, segments, options.scoring);
    std::vector<PolicyRow> rows;
    for (const auto& name : policies) {
        const auto r = run_policy(name, trace, budget, options);
        PolicyRow row;
        row.policy = name;
        row.retained = r.retained.size();
        row.fidelity = retention_fidelity(scores.adjusted, r.retained, budget);
        row.redundancy = redundancy_rate(scores.raw, r.retained, budget);
        if (trace.needle) {
            row.needle_recall = needle_recall(r.retained, *trace.needle);
        }
        if (r.plan) {
            row.mean_block_size = blocksize_histogram(std::span<const CompressionPlan>(&*r.plan, 1)).mean;
        } else if (r.block_size) {
            row.mean_block_size = static_cast<double>(*r.block_size);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> parse_policies(const std::string& list) {
    auto names = split(list, ',');
    if (names.empty()) {
        std::string valid;
        for (const auto& n : policy_names()) {
            valid += (valid.empty() ? "" : ", ") + n;
        }
        throw ConfigError("empty policy list (valid: " + valid + ")");
    }
    for (const auto& n : names) {
        validate_policy_name(n);
    }
    return names;
}

PolicyOptions policy_options(const GlobalOptions& g, std::size_t n_init) {
    PolicyOptions options;
    options.scoring = scoring_config(g);
    options.search = search_config(g);
    options.segmentation = segmentation_config(g);
    options.n_init = n_init;
    return options;
}

json row_to_json(const PolicyRow& r) {
    json j{{"policy", r.policy}, {"retained", r.retained}, {"fidelity", r.fidelity}, {"redundancy", r.redundancy}};
    j["needle_recall"] = r.needle_recall ? json(*r.needle_recall) : json(nullptr);
    j["mean_block_size"] = r.mean_block_size ? json(*r.mean_block_size) : json(nullptr);
    return j;
}

std::string optional_cell(const std::optional<double>& v) { return v ? fixed(*v) : std::string("-"); }

int cmd_compare(const GlobalOptions& g, const CompareOptions& o) {
    const auto policies = parse_policies(o.policies);
    if (o.format != "text" && o.format != "json" && o.format != "csv") {
        throw ConfigError("--format must be text, json or csv");
    }
    const auto budget = resolved_budget(g);
    const auto options = policy_options(g, o.n_init);
    const auto trace = load_trace(o.trace);
    const auto rows = evaluate_policies(trace, policies, budget, options);

    std::ostringstream out;
    if (o.format == "json") {
        json doc{{"trace", o.trace}, {"budget", budget}, {"rows", json::array()}};
        for (const auto& r : rows) {
            doc["rows"].push_back(row_to_json(r));
        }
        doc["manifest"] = manifest("compare", g, json{{"policies", policies}, {"n_init", o.n_init}}, {o.trace},
                                   g.out.empty() ? std::vector<std::string>{} : std::vector<std::string>{g.out});
        out << doc.dump(2) << '\n';
    } else if (o.format == "csv") {
        out << "policy,retained,fidelity,redundancy,needle_recall,mean_block_size\n";
        for (const auto& r : rows) {
            out << r.policy << ',' << r.retained << ',' << fixed(r.fidelity, 8) << ',' << fixed(r.redundancy, 8) << ','
                << (r.needle_recall ? fixed(*r.needle_recall, 8) : "") << ','
                << (r.mean_block_size ? fixed(*r.mean_block_size, 8) : "") << '\n';
        }
    } else {
        out << std::left << std::setw(14) << "policy" << std::right << std::setw(10) << "retained" << std::setw(10)
            << "fidelity" << std::setw(12) << "redundancy" << std::setw(9) << "needle" << std::setw(9) << "block"
            << '\n';
        for (const auto& r : rows) {
            out << std::left << std::setw(14) << r.policy << std::right << std::setw(10) << r.retained << std::setw(10)
                << fixed(r.fidelity) << std::setw(12) << fixed(r.redundancy) << std::setw(9)
                << optional_cell(r.needle_recall) << std::setw(9) << optional_cell(r.mean_block_size) << '\n';
        }
    }

    if (g.out.empty()) {
        std::cout << out.str();
    } else {
        write_file(g.out, out.str());
        std::cout << "wrote " << g.out << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

std::vector<std::string> list_corpus(const std::string& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw IoError("corpus directory not found: " + dir);
    }
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw IoError("corpus directory contains no .json traces: " + dir);
    }
    return files;
}

int cmd_sweep(const GlobalOptions& g, const SweepOptions& o) {
    const auto budgets = parse_size_list(o.budgets, "--budgets");
    const auto policies = parse_policies(o.policies);
    auto options = policy_options(g, o.n_init);
    const auto files = list_corpus(o.corpus);

    std::vector<AttentionTrace> corpus;
    corpus.reserve(files.size());
    for (const auto& f : files) {
        try {
            corpus.push_back(load_trace(f));
        } catch (const Error& e) {
            throw ValidationError(f, e.what());
        }
    }
    spdlog::info("loaded {} traces from {}", corpus.size(), o.corpus);

    std::ostringstream csv;
    csv << "budget,policy,traces,mean_retained,mean_fidelity,mean_redundancy,mean_needle_recall,mean_block_size\n";
    json histograms = json::array();
    std::vector<double> budget_axis;
    std::vector<double> mean_block;

    for (auto budget : budgets) {
        options.search.budget = budget;
        std::vector<CompressionPlan> plans;
        plans.reserve(corpus.size());
        for (const auto& trace : corpus) {
            plans.push_back(compress(trace, options.scoring, options.search, options.segmentation));
        }
        const auto hist = blocksize_histogram(plans);
        histograms.push_back(json{{"budget", budget}, {"histogram", histogram_to_json(hist)}});
        budget_axis.push_back(static_cast<double>(budget));
        mean_block.push_back(hist.mean);

        for (const auto& name : policies) {
            double retained = 0.0, fidelity = 0.0, redundancy = 0.0, recall = 0.0, block = 0.0;
            std::size_t with_needle = 0, with_block = 0;
            for (const auto& trace : corpus) {
                const auto row = evaluate_policies(trace, {name}, budget, options).front();
                retained += static_cast<double>(row.retained);
                fidelity += row.fidelity;
                redundancy += row.redundancy;
                if (row.needle_recall) {
                    recall += *row.needle_recall;
                    ++with_needle;
                }
                if (row.mean_block_size) {
                    block += *row.mean_block_size;
                    ++with_block;
                }
            }
            const double n = static_cast<double>(corpus.size());
            csv << budget << ',' << name << ',' << corpus.size() << ',' << fixed(retained / n, 4) << ','
                << fixed(fidelity / n, 8) << ',' << fixed(redundancy / n, 8) << ','
                << (with_needle ? fixed(recall / static_cast<double>(with_needle), 8) : "") << ','
                << (with_block ? fixed(block / static_cast<double>(with_block), 8) : "") << '\n';
        }
    }

    std::optional<double> rho;
    if (budgets.size() >= 2) {
        rho = spearman(budget_axis, mean_block);
    }

    std::cout << std::setw(8) << "budget" << std::setw(12) << "mean_block" << std::setw(10) << "segments" << '\n';
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        std::cout << std::setw(8) << budgets[i] << std::setw(12) << fixed(mean_block[i])
                  << std::setw(10) << histograms[i]["histogram"]["segments"].get<std::size_t>() << '\n';
    }
    std::cout << "spearman(budget, mean block size) = " << (rho ? fixed(*rho) : std::string("n/a")) << '\n';

    if (g.out.empty()) {
        std::cout << '\n' << csv.str();
        return 0;
    }
    const std::string csv_path = g.out + ".csv";
    const std::string json_path = g.out + ".json";
    const auto m = manifest("sweep", g, json{{"budgets", budgets}, {"policies", policies}, {"n_init", o.n_init}},
                            files, {csv_path, json_path});
    write_file(csv_path, "# manifest: " + m.dump() + "\n" + csv.str());
    json doc{{"manifest", m},
             {"budgets", histograms},
             {"spearman_budget_vs_mean_block_size", rho ? json(*rho) : json(nullptr)}};
    write_file(json_path, doc.dump(2));
    std::cout << "wrote " << csv_path << " and " << json_path << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// metrics

int cmd_metrics(const GlobalOptions& g, const MetricsOptions& o) {
    if (o.trace.empty() && o.kv.empty()) {
        throw ConfigError("metrics needs --trace and/or --kv");
    }
    if (o.format != "text" && o.format != "json") {
        throw ConfigError("--format must be text or json");
    }
    MetricReport report;
    report.title = o.trace.empty() ? "metrics" : "metrics for " + o.trace;

    if (!o.kv.empty()) {
        const auto f = parse_size_list(o.kv, "--kv");
        if (f.size() != 6) {
            throw ConfigError("--kv expects batch,layers,seq_len,heads,head_dim,bytes");
        }
        report.values["kv_bytes"] = static_cast<double>(kv_bytes_estimate(f[0], f[1], f[2], f[3], f[4], f[5]));
    }

    if (!o.trace.empty()) {
        const auto budget = resolved_budget(g);
        const auto scoring = scoring_config(g);
        const auto segmentation = segmentation_config(g);
        const auto block_sizes = parse_size_list(o.block_sizes, "--block-sizes");
        const auto trace = load_trace(o.trace);
        const std::size_t T = trace.compressible_length();
        const auto segments = segment_tokens(trace, segmentation);
        const auto scores = score_trace(trace, segments, scoring);

        report.values["tokens"] = static_cast<double>(T);
        report.values["segments"] = static_cast<double>(segments.size());
        for (auto gsize : block_sizes) {
            std::ostringstream key;
            key << "cross_sentence_rate@" << std::setw(2) << std::setfill('0') << gsize;
            report.values[key.str()] = cross_sentence_rate(segments, gsize, T);
            std::ostringstream rkey;
            rkey << "chunkkv_redundancy@" << std::setw(2) << std::setfill('0') << gsize;
            report.values[rkey.str()] =
                redundancy_rate(scores.raw, evict_fixed_block(trace, budget, gsize).retained, budget);
        }

        if (!o.plan.empty()) {
            const auto plan = read_plan(read_file(o.plan));
            validate_plan(plan, trace);
            report.values["plan_retained"] = static_cast<double>(plan.retained.size());
            report.values["plan_fidelity"] = retention_fidelity(scores.adjusted, plan.retained, plan.budget);
            report.values["plan_redundancy"] = redundancy_rate(scores.raw, plan.retained, plan.budget);
            if (trace.needle) {
                report.values["plan_needle_recall"] = needle_recall(plan.retained, *trace.needle);
            }
            report.histogram = blocksize_histogram(std::span<const CompressionPlan>(&plan, 1));
        }
    }

    std::vector<std::string> inputs;
    for (const auto* p : {&o.trace, &o.plan}) {
        if (!p->empty()) {
            inputs.push_back(*p);
        }
    }
    report.config = manifest("metrics", g, json{{"block_sizes", o.block_sizes}, {"kv", o.kv}}, inputs,
                             g.out.empty() ? std::vector<std::string>{} : std::vector<std::string>{g.out});
    const std::string text = o.format == "json" ? report.to_json().dump(2) + "\n" : report.to_text();
    if (g.out.empty()) {
        std::cout << text;
    } else {
        write_file(g.out, text);
        std::cout << "wrote " << g.out << '\n';
    }
    return 0;
}

void configure_logging() {
    auto logger = spdlog::stderr_logger_mt("sablock");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("SABLOCK_LOG")) {
        spdlog::set_level(spdlog::level::from_str(env));
    }
}

}  // namespace

int run(int argc, char** argv) {
    configure_logging();

    CLI::App app{"KV-cache eviction experiments on attention traces"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
    app.add_option("--alpha", g.alpha, "Segment-factor influence on token scores")->capture_default_str();
    app.add_option("--eta", g.eta, "Diversity weight in the segment factor")->capture_default_str();
    app.add_option("--epsilon", g.epsilon, "Entropy smoothing term")->capture_default_str();
    app.add_option("--tau", g.tau, "Fidelity threshold for accepting a block size")->capture_default_str();
    app.add_option("--gmax", g.g_max, "Largest block size searched")->capture_default_str();
    app.add_option("--ladder", g.ladder, "Candidate block sizes, comma separated")->capture_default_str();
    app.add_flag("--dense-range", g.dense_range, "Search every block size in [1, gmax]");
    app.add_option("--delims", g.delims, "Segment delimiter characters (\\n and \\t escapes)")->capture_default_str();
    app.add_option("--max-seg-len", g.max_seg_len, "Split longer segments")->capture_default_str();
    app.add_option("--budget", g.budget, "Compressible tokens to keep")->capture_default_str();
    app.add_option("-o,--out", g.out, "Output path");

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate synthetic attention traces");
    gen_cmd->add_option("--tokens", gen.tokens, "Compressible-region length T")->capture_default_str();
    gen_cmd->add_option("--heads", gen.heads, "Attention heads")->capture_default_str();
    gen_cmd->add_option("--window", gen.window, "Observation-window length")->capture_default_str();
    gen_cmd->add_option("--needle-at", gen.needle_at, "Needle start index");
    gen_cmd->add_flag("--needle-random", gen.needle_random, "Place the needle at a seeded random depth");
    gen_cmd->add_option("--needle-len", gen.needle_len, "Needle length")->capture_default_str();
    gen_cmd->add_option("--needle-boost", gen.needle_boost, "Needle mass over the median column")->capture_default_str();
    gen_cmd->add_option("--period", gen.period, "Mean tokens per delimiter (0: none)")->capture_default_str();
    gen_cmd->add_option("--skew", gen.skew, "Log-normal sigma of column weights")->capture_default_str();
    gen_cmd->add_option("--count", gen.count, "Traces to write; >1 treats -o as a directory")->capture_default_str();

    CompressOptions comp;
    auto* compress_cmd = app.add_subcommand("compress", "Compress one trace and write its plan");
    compress_cmd->add_option("--trace", comp.trace, "Trace file")->required();

    CompareOptions cmp;
    auto* compare_cmd = app.add_subcommand("compare", "Run several policies on one trace");
    compare_cmd->add_option("--trace", cmp.trace, "Trace file")->required();
    compare_cmd->add_option("--policies", cmp.policies, "streaming,h2o,snapkv,chunkkv:<g>,sentencekv,sablock")
        ->required();
    compare_cmd->add_option("--format", cmp.format, "text, json or csv")->capture_default_str();
    compare_cmd->add_option("--n-init", cmp.n_init, "Sink tokens for streaming")->capture_default_str();

    SweepOptions sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Budget sweep over a trace corpus");
    sweep_cmd->add_option("--corpus", sw.corpus, "Directory of trace files")->required();
    sweep_cmd->add_option("--budgets", sw.budgets, "Comma-separated budgets")->capture_default_str();
    sweep_cmd->add_option("--policies", sw.policies, "Policies to tabulate")->capture_default_str();
    sweep_cmd->add_option("--n-init", sw.n_init, "Sink tokens for streaming")->capture_default_str();

    MetricsOptions met;
    auto* metrics_cmd = app.add_subcommand("metrics", "Diagnostic metrics for a trace and plan");
    metrics_cmd->add_option("--trace", met.trace, "Trace file");
    metrics_cmd->add_option("--plan", met.plan, "Plan file produced by compress");
    metrics_cmd->add_option("--block-sizes", met.block_sizes, "Block sizes for rate metrics")->capture_default_str();
    metrics_cmd->add_option("--kv", met.kv, "batch,layers,seq_len,heads,head_dim,bytes");
    metrics_cmd->add_option("--format", met.format, "text or json")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*gen_cmd) {
            return cmd_gen(g, gen);
        }
        if (*compress_cmd) {
            return cmd_compress(g, comp);
        }
        if (*compare_cmd) {
            return cmd_compare(g, cmp);
        }
        if (*sweep_cmd) {
            return cmd_sweep(g, sw);
        }
        return cmd_metrics(g, met);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const MetricError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace sablock::cli

int main(int argc, char** argv) { return sablock::cli::run(argc, argv); }
