#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "horndelta/batch.hpp"
#include "horndelta/catalog.hpp"
#include "horndelta/join.hpp"
#include "horndelta/scores.hpp"
#include "horndelta/triple_store.hpp"

namespace horndelta {

enum class Mode : std::uint8_t { Vanilla, Search, Xconf };

constexpr MetricKind mode_metric(Mode m) {
    return m == Mode::Xconf ? MetricKind::Xconf : MetricKind::Stdconf;
}

constexpr std::string_view mode_name(Mode m) {
    switch (m) {
        case Mode::Vanilla: return "vanilla";
        case Mode::Search: return "search";
        case Mode::Xconf: return "xconf";
    }
    return "?";
}

std::optional<Mode> mode_from_name(std::string_view name);

// Run-level knobs; defaults follow the reference configuration
// (max length 3, max group size 30k, thresholds 0/0.0, 10M filter switch).
struct RunConfig {
    int max_len = 3;
    std::size_t max_group_size = 30000;
    std::size_t broadcast_threshold = 10'000'000;
    std::uint64_t min_support = 0;
    double min_confidence = 0.0;
    FilterStrategy filter = FilterStrategy::Auto;
    JoinStrategy join = JoinStrategy::Adaptive;
    unsigned workers = 0;  // 0 -> default_worker_count()
    std::uint64_t seed = 0;

    JoinConfig join_config() const {
        return JoinConfig{max_group_size, broadcast_threshold, filter, join, workers};
    }
};

// Deduplicated materialized predictions (the intermediate result I), indexed
// by head fact. Only maintained in vanilla mode.
class IntermediateStore {
  public:
    bool insert(const Prediction& p) {
        auto& rules = by_fact_[p.head_fact()];
        if (std::find(rules.begin(), rules.end(), p.rule) != rules.end()) return false;
        rules.push_back(p.rule);
        ++size_;
        return true;
    }

    bool contains(const Prediction& p) const {
        auto it = by_fact_.find(p.head_fact());
        if (it == by_fact_.end()) return false;
        return std::find(it->second.begin(), it->second.end(), p.rule) != it->second.end();
    }

    std::span<const RuleId> rules_predicting(const Triple& head_fact) const {
        auto it = by_fact_.find(head_fact);
        if (it == by_fact_.end()) return {};
        return it->second;
    }

    std::size_t size() const { return size_; }

    std::vector<Prediction> sorted_entries() const;

  private:
    std::unordered_map<Triple, std::vector<RuleId>, TripleHash> by_fact_;
    std::size_t size_ = 0;
};

// Everything one incremental session owns. Move-only (the catalog pins
// interior pointers).
struct EngineState {
    Dictionary dict;
    TripleStore store;
    RuleCatalog catalog;
    Mode mode = Mode::Search;
    RunConfig config;
    ScoreTable scores;
    std::optional<IntermediateStore> intermediate;  // engaged iff mode == Vanilla
    std::vector<std::string> applied_batches;       // content hashes, in order
};

// Raw triples not in the store, deduplicated, without mutating the store.
UpdateBatch clean_batch(const TripleStore& store, std::span<const Triple> raw);

// New body instantiations introduced by the batch: every path over
// base ∪ batch using at least one batch fact, as a multiset. Covers the batch
// acting as body1, body2, or both, plus direct application of length-2 rules.
std::vector<Prediction> inc_infer(const TripleStore& base, const UpdateBatch& batch,
                                  const RuleCatalog& catalog, const JoinConfig& cfg);

// Case 1, vanilla: distinct new predictions (via I) extend the denominator;
// those whose head already exists in the pre-union base extend the numerator.
// I gains the new predictions.
ScoreDelta infer_update_vanilla(std::span<const Prediction> delta_i, IntermediateStore& inter,
                                const TripleStore& base, const RuleCatalog& catalog);

// Case 2, vanilla: one (1,0) per (batch fact, rule) pair recorded in I.
// Precondition: I already updated with this batch's new predictions.
ScoreDelta check_update_vanilla(const UpdateBatch& batch, const IntermediateStore& inter);

// Case 1, search: predictions regenerable from the pre-union base alone are
// filtered out by searching with the delta's subject/object seeds.
ScoreDelta infer_update_search(std::span<const Prediction> delta_i, const TripleStore& base,
                               const RuleCatalog& catalog, const JoinConfig& cfg);

// Case 2, search: one (1,0) per distinct (batch fact, rule) with at least one
// body path in the updated store.
ScoreDelta check_update_search(const UpdateBatch& batch, const TripleStore& updated,
                               const RuleCatalog& catalog, const JoinConfig& cfg);

// Case 1, xconf: no deduplication; every path contributes (exist, 1).
ScoreDelta infer_update_xconf(std::span<const Prediction> delta_i, const TripleStore& base,
                              const JoinConfig& cfg);

// Case 2, xconf: one (1,0) per (body path, rule) predicting a batch fact.
ScoreDelta check_update_xconf(const UpdateBatch& batch, const TripleStore& updated,
                              const RuleCatalog& catalog, const JoinConfig& cfg);

EngineState engine_init(Dictionary dict, const PredicateSchema& schema, Mode mode,
                        const RunConfig& config, std::span<const Triple> base = {});

// One full update step: clean the batch, infer the delta, score case 1
// against the pre-union base, absorb the batch, score case 2 against the
// updated store. Returns this batch's merged score delta.
ScoreDelta apply_batch(EngineState& state, std::span<const Triple> raw);

// Sequential driver; returns a snapshot of the cumulative table after each
// batch. The final table equals batch mining over the union of all batches.
std::vector<ScoreTable> run_incremental(EngineState& state,
                                        std::span<const std::vector<Triple>> batches);

}  // namespace horndelta
