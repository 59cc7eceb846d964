#include "horndelta/engine.hpp"

#include <algorithm>

#include "horndelta/errors.hpp"
#include "horndelta/parallel.hpp"

namespace horndelta {

std::optional<Mode> mode_from_name(std::string_view name) {
    for (Mode m : {Mode::Vanilla, Mode::Search, Mode::Xconf}) {
        if (mode_name(m) == name) return m;
    }
    return std::nullopt;
}

std::vector<Prediction> IntermediateStore::sorted_entries() const {
    std::vector<Prediction> out;
    out.reserve(size_);
    for (const auto& [fact, rules] : by_fact_) {
        for (RuleId r : rules) out.push_back({fact.pred, fact.sub, fact.obj, r});
    }
    std::sort(out.begin(), out.end());
    return out;
}

UpdateBatch clean_batch(const TripleStore& store, std::span<const Triple> raw) {
    UpdateBatch batch;
    batch.batch_index = store.batch_serial();
    std::unordered_set<Triple, TripleHash> seen;
    for (const Triple& t : raw) {
        if (store.contains(t)) continue;
        if (!seen.insert(t).second) continue;
        batch.facts.push_back(t);
    }
    return batch;
}

namespace {

// Secondary indices over the batch itself, for paths built from two new facts.
struct BatchIndex {
    std::unordered_map<std::uint64_t, std::vector<TermId>> by_pred_sub;  // -> objects
    std::unordered_map<std::uint64_t, std::vector<TermId>> by_pred_obj;  // -> subjects

    explicit BatchIndex(const UpdateBatch& batch) {
        for (const Triple& t : batch.facts) {
            by_pred_sub[pack_pair(t.pred, t.sub)].push_back(t.obj);
            by_pred_obj[pack_pair(t.pred, t.obj)].push_back(t.sub);
        }
    }

    std::span<const TermId> partners(TermId pred, TermId key, Position key_position) const {
        const auto& map = key_position == Position::Subject ? by_pred_sub : by_pred_obj;
        auto it = map.find(pack_pair(pred, key));
        if (it == map.end()) return {};
        return it->second;
    }
};

std::span<const TermId> store_partners(const TripleStore& store, TermId pred, TermId key,
                                       Position key_position) {
    return key_position == Position::Subject ? store.objects_of(pred, key)
                                             : store.subjects_of(pred, key);
}

TermId term_at(const Triple& t, Position p) { return p == Position::Subject ? t.sub : t.obj; }

// Emits the shape's slice of the new-path multiset for one batch fact.
template <class Emit>
void infer_for_fact(Shape shape, const Triple& f, const TripleStore& base,
                    const BatchIndex& batch_index, const TemplateRules& rules, Emit&& emit) {
    const ShapeSig sig = shape_sig(shape);

    if (sig.body_atoms == 1) {
        auto it = rules.by_body1.find(f.pred);
        if (it == rules.by_body1.end()) return;
        const TermId x = term_at(f, detail::var_position(sig.b1, Var::X));
        const TermId y = term_at(f, detail::var_position(sig.b1, Var::Y));
        for (const CandidateRule* r : it->second) emit(Prediction{r->head, x, y, r->id});
        return;
    }

    const Position z_in_b1 = detail::var_position(sig.b1, Var::Z);
    const Position z_in_b2 = detail::var_position(sig.b2, Var::Z);

    // Batch fact as body1: partners from the base (res1) and the batch (res3).
    if (auto it = rules.by_body1.find(f.pred); it != rules.by_body1.end()) {
        const TermId z = term_at(f, z_in_b1);
        const TermId x = term_at(f, detail::var_position(sig.b1, Var::X));
        for (const CandidateRule* r : it->second) {
            for (TermId y : store_partners(base, r->body2, z, z_in_b2)) {
                emit(Prediction{r->head, x, y, r->id});
            }
            for (TermId y : batch_index.partners(r->body2, z, z_in_b2)) {
                emit(Prediction{r->head, x, y, r->id});
            }
        }
    }
    // Batch fact as body2 with a base fact as body1 (res2).
    if (auto it = rules.by_body2.find(f.pred); it != rules.by_body2.end()) {
        const TermId z = term_at(f, z_in_b2);
        const TermId y = term_at(f, detail::var_position(sig.b2, Var::Y));
        for (const CandidateRule* r : it->second) {
            for (TermId x : store_partners(base, r->body1, z, z_in_b1)) {
                emit(Prediction{r->head, x, y, r->id});
            }
        }
    }
}

std::vector<Prediction> inc_infer_shape(Shape shape, const TripleStore& base,
                                        const UpdateBatch& batch, const BatchIndex& batch_index,
                                        const RuleCatalog& catalog, const JoinConfig& cfg) {
    const TemplateRules& rules = catalog.shape_rules(shape);
    if (rules.empty() || batch.facts.empty()) return {};

    const unsigned workers = cfg.effective_workers();
    std::vector<std::vector<Prediction>> partials(workers);
    parallel_items(batch.facts.size(), workers, [&](unsigned w, std::size_t i) {
        infer_for_fact(shape, batch.facts[i], base, batch_index, rules,
                       [&](const Prediction& p) { partials[w].push_back(p); });
    });

    std::vector<Prediction> out;
    std::size_t total = 0;
    for (const auto& part : partials) total += part.size();
    out.reserve(total);
    for (auto& part : partials) out.insert(out.end(), part.begin(), part.end());
    return out;
}

// Groups a mixed-shape delta by shape; returns index lists.
std::array<std::vector<std::uint32_t>, 6> split_by_shape(std::span<const Prediction> delta_i,
                                                         const RuleCatalog& catalog) {
    std::array<std::vector<std::uint32_t>, 6> slices;
    for (std::uint32_t i = 0; i < delta_i.size(); ++i) {
        if (delta_i[i].rule >= catalog.rules().size()) {
            throw ConsistencyError("prediction references unknown rule " +
                                   std::to_string(delta_i[i].rule));
        }
        Shape s = catalog.rule(delta_i[i].rule).shape;
        slices[static_cast<std::size_t>(s)].push_back(i);
    }
    return slices;
}

}  // namespace

std::vector<Prediction> inc_infer(const TripleStore& base, const UpdateBatch& batch,
                                  const RuleCatalog& catalog, const JoinConfig& cfg) {
    BatchIndex batch_index(batch);
    std::vector<Prediction> out;
    for (Shape shape : kAllShapes) {
        auto slice = inc_infer_shape(shape, base, batch, batch_index, catalog, cfg);
        out.insert(out.end(), slice.begin(), slice.end());
    }
    return out;
}

ScoreDelta infer_update_vanilla(std::span<const Prediction> delta_i, IntermediateStore& inter,
                                const TripleStore& base, const RuleCatalog& catalog) {
    ScoreDelta delta;
    for (const Prediction& p : delta_i) {
        if (p.rule >= catalog.rules().size()) {
            throw ConsistencyError("prediction references unknown rule " + std::to_string(p.rule));
        }
        if (!inter.insert(p)) continue;  // duplicate within the delta, or known in I
        delta.add(p.rule, base.contains(p.head_fact()) ? 1 : 0, 1);
    }
    return delta;
}

ScoreDelta check_update_vanilla(const UpdateBatch& batch, const IntermediateStore& inter) {
    ScoreDelta delta;
    for (const Triple& f : batch.facts) {
        for (RuleId rule : inter.rules_predicting(f)) delta.add(rule, 1, 0);
    }
    return delta;
}

ScoreDelta infer_update_search(std::span<const Prediction> delta_i, const TripleStore& base,
                               const RuleCatalog& catalog, const JoinConfig& cfg) {
    ScoreDelta delta;
    auto slices = split_by_shape(delta_i, catalog);

    for (Shape shape : kAllShapes) {
        const auto& slice = slices[static_cast<std::size_t>(shape)];
        if (slice.empty()) continue;

        std::unordered_set<Prediction, PredictionHash> pending;
        std::unordered_set<TermId> subjects;
        std::unordered_set<TermId> objects;
        for (std::uint32_t i : slice) {
            const Prediction& p = delta_i[i];
            if (pending.insert(p).second) {
                subjects.insert(p.sub);
                objects.insert(p.obj);
            }
        }

        // Drop predictions the pre-union base can regenerate on its own.
        const unsigned workers = cfg.effective_workers();
        std::vector<std::vector<Prediction>> hits(workers);
        SeedKeys seeds{&subjects, &objects};
        const Shape shapes[] = {shape};
        search(base, catalog, seeds, cfg,
               [&](unsigned w, const Prediction& p) {
                   if (pending.contains(p)) hits[w].push_back(p);
               },
               nullptr, nullptr, shapes);
        for (const auto& part : hits) {
            for (const Prediction& p : part) pending.erase(p);
        }

        for (const Prediction& p : pending) {
            delta.add(p.rule, base.contains(p.head_fact()) ? 1 : 0, 1);
        }
    }
    return delta;
}

namespace {

// Shared by the two check-update variants: emits every (path, rule) hit on a
// batch fact in the updated store, narrowed to rules whose head occurs in the
// batch.
template <class OnHit>
void search_batch_hits(const UpdateBatch& batch, const TripleStore& updated,
                       const RuleCatalog& catalog, const JoinConfig& cfg, OnHit&& on_hit) {
    if (batch.facts.empty()) return;

    std::unordered_set<Triple, TripleHash> batch_facts;
    std::unordered_set<TermId> heads;
    std::unordered_set<TermId> subjects;
    std::unordered_set<TermId> objects;
    for (const Triple& t : batch.facts) {
        batch_facts.insert(t);
        heads.insert(t.pred);
        subjects.insert(t.sub);
        objects.insert(t.obj);
    }

    std::array<TemplateRules, 6> narrowed;
    RuleViews views;
    bool any = false;
    for (Shape s : kAllShapes) {
        narrowed[static_cast<std::size_t>(s)] = catalog.shape_rules_with_heads(s, heads);
        views.views[static_cast<std::size_t>(s)] = &narrowed[static_cast<std::size_t>(s)];
        any = any || !narrowed[static_cast<std::size_t>(s)].empty();
    }
    if (!any) return;

    SeedKeys seeds{&subjects, &objects};
    search(updated, catalog, seeds, cfg,
           [&](unsigned w, const Prediction& p) {
               if (batch_facts.contains(p.head_fact())) on_hit(w, p);
           },
           nullptr, &views);
}

}  // namespace

ScoreDelta check_update_search(const UpdateBatch& batch, const TripleStore& updated,
                               const RuleCatalog& catalog, const JoinConfig& cfg) {
    const unsigned workers = cfg.effective_workers();
    std::vector<std::vector<Prediction>> hits(workers);
    search_batch_hits(batch, updated, catalog, cfg,
                      [&](unsigned w, const Prediction& p) { hits[w].push_back(p); });

    // Distinct: one increment per (fact, rule) regardless of path multiplicity.
    std::unordered_set<Prediction, PredictionHash> distinct;
    for (const auto& part : hits) {
        for (const Prediction& p : part) distinct.insert(p);
    }
    ScoreDelta delta;
    for (const Prediction& p : distinct) delta.add(p.rule, 1, 0);
    return delta;
}

ScoreDelta infer_update_xconf(std::span<const Prediction> delta_i, const TripleStore& base,
                              const JoinConfig& cfg) {
    const unsigned workers = cfg.effective_workers();
    std::vector<ScoreDelta> partials(workers);
    parallel_ranges(delta_i.size(), workers, [&](unsigned w, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Prediction& p = delta_i[i];
            partials[w].add(p.rule, base.contains(p.head_fact()) ? 1 : 0, 1);
        }
    });
    ScoreDelta delta;
    for (const ScoreDelta& d : partials) delta.merge(d);
    return delta;
}

ScoreDelta check_update_xconf(const UpdateBatch& batch, const TripleStore& updated,
                              const RuleCatalog& catalog, const JoinConfig& cfg) {
    const unsigned workers = cfg.effective_workers();
    std::vector<ScoreDelta> partials(workers);
    search_batch_hits(batch, updated, catalog, cfg,
                      [&](unsigned w, const Prediction& p) { partials[w].add(p.rule, 1, 0); });
    ScoreDelta delta;
    for (const ScoreDelta& d : partials) delta.merge(d);
    return delta;
}

EngineState engine_init(Dictionary dict, const PredicateSchema& schema, Mode mode,
                        const RunConfig& config, std::span<const Triple> base) {
    EngineState state;
    state.mode = mode;
    state.config = config;
    state.catalog = generate_candidates(schema, dict, config.max_len);
    index_catalog(state.catalog);
    state.scores = ScoreTable(mode_metric(mode));
    if (mode == Mode::Vanilla) state.intermediate.emplace();
    state.store = build_store(base);
    state.dict = std::move(dict);

    if (state.store.fact_count() > 0) {
        MineOptions opts;
        opts.metric = mode == Mode::Xconf ? Metric::Xconf : Metric::Stdconf;
        opts.materialize_intermediate = mode == Mode::Vanilla;
        MineResult mined =
            mine_batch(state.store, state.catalog, state.dict, config.join_config(), opts);
        state.scores = std::move(mined.scores.table(mode_metric(mode)));
        if (mode == Mode::Vanilla) {
            for (const Prediction& p : mined.intermediate) state.intermediate->insert(p);
        }
    } else {
        validate_coverage(state.store, state.catalog, state.dict);
    }
    return state;
}

ScoreDelta apply_batch(EngineState& state, std::span<const Triple> raw) {
    UpdateBatch batch = clean_batch(state.store, raw);

    // Schema coverage must hold before any scoring.
    {
        std::vector<std::string> missing;
        for (const Triple& t : batch.facts) {
            if (state.catalog.schema().find(t.pred) == nullptr) {
                missing.push_back(state.dict.term(t.pred));
            }
        }
        if (!missing.empty()) {
            std::sort(missing.begin(), missing.end());
            missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
            std::string msg = "predicates missing from schema:";
            for (const auto& name : missing) msg += " " + name;
            throw SchemaError(msg);
        }
    }

    const JoinConfig cfg = state.config.join_config();
    BatchIndex batch_index(batch);

    // Case 1 per shape, streaming the delta slices against the pre-union base.
    ScoreDelta infer_delta;
    for (Shape shape : kAllShapes) {
        auto slice = inc_infer_shape(shape, state.store, batch, batch_index, state.catalog, cfg);
        if (slice.empty()) continue;
        switch (state.mode) {
            case Mode::Vanilla:
                infer_delta.merge(
                    infer_update_vanilla(slice, *state.intermediate, state.store, state.catalog));
                break;
            case Mode::Search:
                infer_delta.merge(infer_update_search(slice, state.store, state.catalog, cfg));
                break;
            case Mode::Xconf:
                infer_delta.merge(infer_update_xconf(slice, state.store, cfg));
                break;
        }
    }
    state.scores.apply(infer_delta);

    auto applied = apply_update(std::move(state.store), batch.facts);
    state.store = std::move(applied.store);

    // Case 2 against the updated store.
    ScoreDelta check_delta;
    switch (state.mode) {
        case Mode::Vanilla:
            check_delta = check_update_vanilla(batch, *state.intermediate);
            break;
        case Mode::Search:
            check_delta = check_update_search(batch, state.store, state.catalog, cfg);
            break;
        case Mode::Xconf:
            check_delta = check_update_xconf(batch, state.store, state.catalog, cfg);
            break;
    }
    state.scores.apply(check_delta);

    ScoreDelta batch_delta = std::move(infer_delta);
    batch_delta.merge(check_delta);
    return batch_delta;
}

std::vector<ScoreTable> run_incremental(EngineState& state,
                                        std::span<const std::vector<Triple>> batches) {
    std::vector<ScoreTable> snapshots;
    snapshots.reserve(batches.size());
    for (const auto& raw : batches) {
        apply_batch(state, raw);
        snapshots.push_back(state.scores);
    }
    return snapshots;
}

}  // namespace horndelta
