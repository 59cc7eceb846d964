#include "horndelta/scores.hpp"

#include <algorithm>
#include <cstdio>

#include "horndelta/errors.hpp"
#include "horndelta/tsv.hpp"

namespace horndelta {

int compare_confidence(const Counter& a, const Counter& b) {
    using u128 = unsigned __int128;
    // A never-fired rule (den == 0) compares as 0/1.
    std::uint64_t an = a.denominator == 0 ? 0 : a.numerator;
    std::uint64_t ad = a.denominator == 0 ? 1 : a.denominator;
    std::uint64_t bn = b.denominator == 0 ? 0 : b.numerator;
    std::uint64_t bd = b.denominator == 0 ? 1 : b.denominator;
    u128 lhs = static_cast<u128>(an) * bd;
    u128 rhs = static_cast<u128>(bn) * ad;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

void ScoreTable::apply(const ScoreDelta& delta) {
    for (const auto& [rule, c] : delta.cells()) {
        Counter& row = rows_[rule];
        row.numerator += c.numerator;
        row.denominator += c.denominator;
        if (row.numerator > row.denominator) {
            throw ConsistencyError("rule " + std::to_string(rule) +
                                   ": numerator exceeds denominator after merge (" +
                                   std::to_string(row.numerator) + "/" +
                                   std::to_string(row.denominator) + ")");
        }
    }
}

namespace {

struct EmitRow {
    RuleId rule;
    MetricKind kind;
    Counter counter;
};

std::string format_row(const EmitRow& row, const RuleCatalog& catalog, const Dictionary& dict) {
    const CandidateRule& r = catalog.rule(row.rule);
    char conf[32];
    std::snprintf(conf, sizeof(conf), "%.6f", confidence(row.counter));
    std::string out;
    out += std::to_string(row.rule);
    out += '\t';
    out += shape_name(r.shape);
    out += '\t';
    out += dict.term(r.head);
    out += '\t';
    out += dict.term(r.body1);
    out += '\t';
    out += r.body2 == kInvalidTerm ? "-" : dict.term(r.body2);
    out += '\t';
    out += metric_name(row.kind);
    out += '\t';
    out += std::to_string(row.counter.numerator);
    out += '\t';
    out += std::to_string(row.counter.denominator);
    out += '\t';
    out += conf;
    return out;
}

void collect(const ScoreTable& table, const EmitOptions& opts, std::vector<EmitRow>& rows) {
    for (const auto& [rule, c] : table.rows()) {
        if (c.denominator == 0) continue;
        if (c.numerator < opts.min_support) continue;
        if (static_cast<double>(c.numerator) <
            opts.min_confidence * static_cast<double>(c.denominator)) {
            continue;
        }
        rows.push_back({rule, table.kind(), c});
    }
}

std::vector<std::string> finish(std::vector<EmitRow> rows, const RuleCatalog& catalog,
                                const Dictionary& dict) {
    std::sort(rows.begin(), rows.end(), [](const EmitRow& a, const EmitRow& b) {
        int cmp = compare_confidence(a.counter, b.counter);
        if (cmp != 0) return cmp > 0;
        if (a.rule != b.rule) return a.rule < b.rule;
        return a.kind < b.kind;
    });
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (const EmitRow& r : rows) out.push_back(format_row(r, catalog, dict));
    return out;
}

}  // namespace

std::vector<std::string> emit_scores(const ScoreSet& scores, const RuleCatalog& catalog,
                                     const Dictionary& dict, const EmitOptions& opts) {
    std::vector<EmitRow> rows;
    if (scores.stdconf) collect(*scores.stdconf, opts, rows);
    if (scores.xconf) collect(*scores.xconf, opts, rows);
    return finish(std::move(rows), catalog, dict);
}

std::vector<std::string> emit_scores(const ScoreTable& table, const RuleCatalog& catalog,
                                     const Dictionary& dict, const EmitOptions& opts) {
    std::vector<EmitRow> rows;
    collect(table, opts, rows);
    return finish(std::move(rows), catalog, dict);
}

void write_rows(std::ostream& out, const std::vector<std::string>& rows) {
    for (const std::string& row : rows) out << row << '\n';
}

std::uint64_t score_checksum(const std::vector<std::string>& rows) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const std::string& row : rows) {
        h = fnv1a64(row, h);
        h = fnv1a64("\n", h);
    }
    return h;
}

}  // namespace horndelta
