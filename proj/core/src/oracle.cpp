#include "horndelta/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace horndelta {

namespace {

TermId at(const Triple& t, const AtomSig& sig, Var v) {
    return sig.subject == v ? t.sub : t.obj;
}

}  // namespace

std::vector<Prediction> brute_force_predictions(const TripleStore& store,
                                                const RuleCatalog& catalog) {
    std::map<TermId, std::vector<Triple>> by_pred;
    for (const Triple& t : store.facts()) by_pred[t.pred].push_back(t);
    static const std::vector<Triple> kEmpty;
    auto bucket = [&](TermId p) -> const std::vector<Triple>& {
        auto it = by_pred.find(p);
        return it == by_pred.end() ? kEmpty : it->second;
    };

    std::vector<Prediction> out;
    for (const CandidateRule& r : catalog.rules()) {
        const ShapeSig sig = shape_sig(r.shape);
        if (sig.body_atoms == 1) {
            for (const Triple& f : bucket(r.body1)) {
                out.push_back({r.head, at(f, sig.b1, Var::X), at(f, sig.b1, Var::Y), r.id});
            }
            continue;
        }
        for (const Triple& f1 : bucket(r.body1)) {
            const TermId z = at(f1, sig.b1, Var::Z);
            const TermId x = at(f1, sig.b1, Var::X);
            for (const Triple& f2 : bucket(r.body2)) {
                if (at(f2, sig.b2, Var::Z) != z) continue;
                out.push_back({r.head, x, at(f2, sig.b2, Var::Y), r.id});
            }
        }
    }
    return out;
}

ScoreSet brute_force_scores(const TripleStore& store, const RuleCatalog& catalog, Metric metric) {
    const bool want_std = metric != Metric::Xconf;
    const bool want_x = metric != Metric::Stdconf;

    std::set<Triple> fact_set(store.facts().begin(), store.facts().end());
    std::vector<Prediction> paths = brute_force_predictions(store, catalog);

    ScoreSet scores;
    if (want_x) {
        scores.xconf.emplace(MetricKind::Xconf);
        ScoreDelta delta;
        for (const Prediction& p : paths) {
            delta.add(p.rule, fact_set.count(p.head_fact()) ? 1 : 0, 1);
        }
        scores.xconf->apply(delta);
    }
    if (want_std) {
        scores.stdconf.emplace(MetricKind::Stdconf);
        std::set<std::tuple<RuleId, TermId, TermId>> distinct;
        ScoreDelta delta;
        for (const Prediction& p : paths) {
            if (!distinct.emplace(p.rule, p.sub, p.obj).second) continue;
            delta.add(p.rule, fact_set.count(p.head_fact()) ? 1 : 0, 1);
        }
        scores.stdconf->apply(delta);
    }
    return scores;
}

}  // namespace horndelta
