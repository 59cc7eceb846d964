#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "horndelta/catalog.hpp"
#include "horndelta/dictionary.hpp"
#include "horndelta/ids.hpp"

namespace horndelta {

enum class MetricKind : std::uint8_t { Stdconf, Xconf };

// Which metric(s) a mining call should produce.
enum class Metric : std::uint8_t { Stdconf, Xconf, Both };

constexpr std::string_view metric_name(MetricKind k) {
    return k == MetricKind::Stdconf ? "stdconf" : "xconf";
}

// Exact integer counter pair; confidence is numerator / denominator.
struct Counter {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 0;

    friend bool operator==(const Counter&, const Counter&) = default;
};

inline double confidence(const Counter& c) {
    if (c.denominator == 0) return 0.0;
    return static_cast<double>(c.numerator) / static_cast<double>(c.denominator);
}

// Exact comparison of a.num/a.den vs b.num/b.den; empty counters compare as 0.
int compare_confidence(const Counter& a, const Counter& b);

// Per-rule additive counter changes produced by one update step or one
// worker. Merging deltas is commutative and associative, so partials can be
// reduced in any order or tree shape.
class ScoreDelta {
  public:
    void add(RuleId rule, std::uint64_t num, std::uint64_t den) {
        if (num == 0 && den == 0) return;
        Counter& c = cells_[rule];
        c.numerator += num;
        c.denominator += den;
    }

    void merge(const ScoreDelta& other) {
        for (const auto& [rule, c] : other.cells_) add(rule, c.numerator, c.denominator);
    }

    bool empty() const { return cells_.empty(); }
    std::size_t size() const { return cells_.size(); }
    const std::unordered_map<RuleId, Counter>& cells() const { return cells_; }

  private:
    std::unordered_map<RuleId, Counter> cells_;
};

// Cumulative per-rule counters for one metric. apply() checks the
// numerator <= denominator invariant; a violation means an engine bug.
class ScoreTable {
  public:
    ScoreTable() = default;
    explicit ScoreTable(MetricKind kind) : kind_(kind) {}

    MetricKind kind() const { return kind_; }

    void apply(const ScoreDelta& delta);
    void set(RuleId rule, Counter c) { rows_[rule] = c; }

    const Counter* find(RuleId rule) const {
        auto it = rows_.find(rule);
        return it == rows_.end() ? nullptr : &it->second;
    }
    Counter at_or_zero(RuleId rule) const {
        const Counter* c = find(rule);
        return c ? *c : Counter{};
    }

    const std::unordered_map<RuleId, Counter>& rows() const { return rows_; }
    bool operator==(const ScoreTable& other) const {
        return kind_ == other.kind_ && rows_ == other.rows_;
    }

  private:
    MetricKind kind_ = MetricKind::Stdconf;
    std::unordered_map<RuleId, Counter> rows_;
};

struct ScoreSet {
    std::optional<ScoreTable> stdconf;
    std::optional<ScoreTable> xconf;

    ScoreTable& table(MetricKind k) { return k == MetricKind::Stdconf ? *stdconf : *xconf; }
    const ScoreTable& table(MetricKind k) const {
        return k == MetricKind::Stdconf ? *stdconf : *xconf;
    }
};

struct EmitOptions {
    std::uint64_t min_support = 0;
    double min_confidence = 0.0;
};

// Canonical report rows:
// `rule_id template head body1 body2 metric numerator denominator confidence`
// for every rule with a nonzero denominator passing both thresholds, ordered
// by confidence desc, then rule_id, then metric name.
std::vector<std::string> emit_scores(const ScoreSet& scores, const RuleCatalog& catalog,
                                     const Dictionary& dict, const EmitOptions& opts = {});

std::vector<std::string> emit_scores(const ScoreTable& table, const RuleCatalog& catalog,
                                     const Dictionary& dict, const EmitOptions& opts = {});

void write_rows(std::ostream& out, const std::vector<std::string>& rows);

// FNV-1a over the canonical rows; used by benchmarks to certify that variant
// runs produced identical score tables.
std::uint64_t score_checksum(const std::vector<std::string>& rows);

}  // namespace horndelta
