#include "horndelta/batch.hpp"

#include <algorithm>

#include "horndelta/errors.hpp"

namespace horndelta {

void validate_coverage(const TripleStore& store, const RuleCatalog& catalog,
                       const Dictionary& dict) {
    std::vector<std::string> missing;
    for (TermId pred : store.predicates()) {
        if (catalog.schema().find(pred) == nullptr) missing.push_back(dict.term(pred));
    }
    if (missing.empty()) return;
    std::sort(missing.begin(), missing.end());
    std::string msg = "predicates missing from schema:";
    for (const auto& name : missing) msg += " " + name;
    throw SchemaError(msg);
}

MineResult mine_batch(const TripleStore& store, const RuleCatalog& catalog,
                      const Dictionary& dict, const JoinConfig& cfg, const MineOptions& opts) {
    validate_coverage(store, catalog, dict);

    const bool want_std = opts.metric != Metric::Xconf;
    const bool want_x = opts.metric != Metric::Stdconf;
    const bool collect = want_std || opts.materialize_intermediate;
    const unsigned workers = cfg.effective_workers();

    std::vector<ScoreDelta> x_partials(workers);
    std::vector<std::vector<Prediction>> collected(workers);

    search(store, catalog, SeedKeys::all(), cfg, [&](unsigned w, const Prediction& p) {
        if (want_x) {
            x_partials[w].add(p.rule, store.contains(p.head_fact()) ? 1 : 0, 1);
        }
        if (collect) collected[w].push_back(p);
    });

    MineResult result;
    if (want_x) {
        result.scores.xconf.emplace(MetricKind::Xconf);
        ScoreDelta merged;
        for (const ScoreDelta& d : x_partials) merged.merge(d);
        result.scores.xconf->apply(merged);
    }

    if (collect) {
        std::vector<Prediction> all;
        std::size_t total = 0;
        for (const auto& part : collected) total += part.size();
        all.reserve(total);
        for (auto& part : collected) all.insert(all.end(), part.begin(), part.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());

        if (want_std) {
            result.scores.stdconf.emplace(MetricKind::Stdconf);
            ScoreDelta delta;
            for (const Prediction& p : all) {
                delta.add(p.rule, store.contains(p.head_fact()) ? 1 : 0, 1);
            }
            result.scores.stdconf->apply(delta);
        }
        if (opts.materialize_intermediate) {
            result.intermediate = std::move(all);
        }
    }
    return result;
}

}  // namespace horndelta
