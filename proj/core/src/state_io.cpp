#include "horndelta/state_io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "horndelta/errors.hpp"
#include "horndelta/tsv.hpp"

namespace horndelta {

namespace {

constexpr std::string_view kStateTag = "horndelta-state";
constexpr std::uint64_t kStateVersion = 1;

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    return out;
}

std::string strategy_name(FilterStrategy s) {
    switch (s) {
        case FilterStrategy::Broadcast: return "broadcast";
        case FilterStrategy::Join: return "join";
        default: return "auto";
    }
}

std::string strategy_name(JoinStrategy s) {
    switch (s) {
        case JoinStrategy::Rules: return "rules";
        case JoinStrategy::Facts: return "facts";
        default: return "adaptive";
    }
}

FilterStrategy filter_from_name(std::string_view name, std::size_t line) {
    if (name == "broadcast") return FilterStrategy::Broadcast;
    if (name == "join") return FilterStrategy::Join;
    if (name == "auto") return FilterStrategy::Auto;
    throw ParseError(line, "unknown filter strategy '" + std::string(name) + "'");
}

JoinStrategy join_from_name(std::string_view name, std::size_t line) {
    if (name == "rules") return JoinStrategy::Rules;
    if (name == "facts") return JoinStrategy::Facts;
    if (name == "adaptive") return JoinStrategy::Adaptive;
    throw ParseError(line, "unknown join strategy '" + std::string(name) + "'");
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string batch_content_hash(const std::string& bytes) {
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016" PRIx64, fnv1a64(bytes));
    return hex;
}

std::vector<std::string> emit_delta_rows(const ScoreDelta& delta, MetricKind kind,
                                         const RuleCatalog& catalog, const Dictionary& dict) {
    std::vector<RuleId> order;
    order.reserve(delta.size());
    for (const auto& [rule, _] : delta.cells()) order.push_back(rule);
    std::sort(order.begin(), order.end());

    std::vector<std::string> rows;
    rows.reserve(order.size());
    for (RuleId id : order) {
        const Counter& c = delta.cells().at(id);
        const CandidateRule& r = catalog.rule(id);
        std::string row = std::to_string(id);
        row += '\t';
        row += shape_name(r.shape);
        row += '\t';
        row += dict.term(r.head);
        row += '\t';
        row += dict.term(r.body1);
        row += '\t';
        row += r.body2 == kInvalidTerm ? "-" : dict.term(r.body2);
        row += '\t';
        row += metric_name(kind);
        row += '\t';
        row += std::to_string(c.numerator);
        row += '\t';
        row += std::to_string(c.denominator);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_delta_file(const std::filesystem::path& dir, std::uint64_t batch_number,
                      const ScoreDelta& delta, MetricKind kind, const RuleCatalog& catalog,
                      const Dictionary& dict) {
    std::filesystem::create_directories(dir / "deltas");
    char name[32];
    std::snprintf(name, sizeof(name), "batch_%04" PRIu64 ".tsv", batch_number);
    auto out = open_out(dir / "deltas" / name);
    write_rows(out, emit_delta_rows(delta, kind, catalog, dict));
}

void save_state(const EngineState& state, const std::filesystem::path& dir,
                const std::string& schema_text) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "manifest.tsv");
        out << kStateTag << '\t' << kStateVersion << '\n';
        out << "mode\t" << mode_name(state.mode) << '\n';
        out << "max_len\t" << state.config.max_len << '\n';
        out << "max_group_size\t" << state.config.max_group_size << '\n';
        out << "broadcast_threshold\t" << state.config.broadcast_threshold << '\n';
        out << "filter_strategy\t" << strategy_name(state.config.filter) << '\n';
        out << "join_strategy\t" << strategy_name(state.config.join) << '\n';
        out << "min_support\t" << state.config.min_support << '\n';
        char conf[32];
        std::snprintf(conf, sizeof(conf), "%.6f", state.config.min_confidence);
        out << "min_confidence\t" << conf << '\n';
        out << "seed\t" << state.config.seed << '\n';
        out << "batches\t" << state.applied_batches.size() << '\n';
        for (const std::string& hash : state.applied_batches) {
            out << "batch_hash\t" << hash << '\n';
        }
    }
    {
        auto out = open_out(dir / "schema.tsv");
        out << schema_text;
    }
    snapshot(state.store, state.dict, dir / "kb");
    {
        auto out = open_out(dir / "scores.tsv");
        write_rows(out, emit_scores(state.scores, state.catalog, state.dict));
    }
    if (state.mode == Mode::Vanilla) {
        auto out = open_out(dir / "intermediate.tsv");
        for (const Prediction& p : state.intermediate->sorted_entries()) {
            out << p.head << '\t' << p.sub << '\t' << p.obj << '\t' << p.rule << '\n';
        }
    }
}

EngineState load_state(const std::filesystem::path& dir) {
    EngineState state;
    std::vector<std::string> hashes;
    bool tagged = false;
    {
        std::ifstream in(dir / "manifest.tsv", std::ios::binary);
        if (!in) throw IoError("not a state directory: " + dir.string());
        for_each_data_line(in, [&](std::size_t line, std::string_view text) {
            auto fields = split_tabs(text);
            if (fields.size() != 2) throw ParseError(line, "bad manifest row");
            const auto key = fields[0];
            const auto value = fields[1];
            if (key == kStateTag) {
                if (parse_u64(value, line) != kStateVersion) {
                    throw IoError("state version mismatch in " + dir.string());
                }
                tagged = true;
            } else if (key == "mode") {
                auto mode = mode_from_name(value);
                if (!mode) throw ParseError(line, "unknown mode '" + std::string(value) + "'");
                state.mode = *mode;
            } else if (key == "max_len") {
                state.config.max_len = static_cast<int>(parse_u64(value, line));
            } else if (key == "max_group_size") {
                state.config.max_group_size = parse_u64(value, line);
            } else if (key == "broadcast_threshold") {
                state.config.broadcast_threshold = parse_u64(value, line);
            } else if (key == "filter_strategy") {
                state.config.filter = filter_from_name(value, line);
            } else if (key == "join_strategy") {
                state.config.join = join_from_name(value, line);
            } else if (key == "min_support") {
                state.config.min_support = parse_u64(value, line);
            } else if (key == "min_confidence") {
                state.config.min_confidence = std::stod(std::string(value));
            } else if (key == "seed") {
                state.config.seed = parse_u64(value, line);
            } else if (key == "batch_hash") {
                hashes.emplace_back(value);
            }
        });
        if (!tagged) throw IoError("not a state directory: " + dir.string());
    }

    auto loaded = load_snapshot(dir / "kb");
    state.dict = std::move(loaded.dictionary);
    state.store = std::move(loaded.store);
    state.applied_batches = std::move(hashes);

    {
        std::ifstream in(dir / "schema.tsv", std::ios::binary);
        if (!in) throw IoError("missing schema.tsv in " + dir.string());
        PredicateSchema schema = parse_schema(in, state.dict);
        state.catalog = generate_candidates(schema, state.dict, state.config.max_len);
        index_catalog(state.catalog);
    }

    state.scores = ScoreTable(mode_metric(state.mode));
    {
        std::ifstream in(dir / "scores.tsv", std::ios::binary);
        if (!in) throw IoError("missing scores.tsv in " + dir.string());
        for_each_data_line(in, [&](std::size_t line, std::string_view text) {
            auto fields = split_tabs(text);
            if (fields.size() != 9) throw ParseError(line, "bad score row");
            RuleId rule = static_cast<RuleId>(parse_u64(fields[0], line));
            if (rule >= state.catalog.rules().size()) {
                throw ConsistencyError("score row references unknown rule " +
                                       std::to_string(rule));
            }
            if (fields[5] != metric_name(state.scores.kind())) {
                throw ConsistencyError("score metric does not match session mode");
            }
            Counter c{parse_u64(fields[6], line), parse_u64(fields[7], line)};
            state.scores.set(rule, c);
        });
    }

    if (state.mode == Mode::Vanilla) {
        state.intermediate.emplace();
        std::ifstream in(dir / "intermediate.tsv", std::ios::binary);
        if (!in) throw IoError("missing intermediate.tsv in " + dir.string());
        for_each_data_line(in, [&](std::size_t line, std::string_view text) {
            auto fields = split_tabs(text);
            if (fields.size() != 4) throw ParseError(line, "bad intermediate row");
            Prediction p;
            p.head = static_cast<TermId>(parse_u64(fields[0], line));
            p.sub = static_cast<TermId>(parse_u64(fields[1], line));
            p.obj = static_cast<TermId>(parse_u64(fields[2], line));
            p.rule = static_cast<RuleId>(parse_u64(fields[3], line));
            state.intermediate->insert(p);
        });
    }
    return state;
}

void override_runtime_knobs(EngineState& state, const RunConfig& knobs) {
    state.config.max_group_size = knobs.max_group_size;
    state.config.broadcast_threshold = knobs.broadcast_threshold;
    state.config.filter = knobs.filter;
    state.config.join = knobs.join;
    state.config.workers = knobs.workers;
}

}  // namespace horndelta
