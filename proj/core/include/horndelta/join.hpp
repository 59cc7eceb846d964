#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "horndelta/catalog.hpp"
#include "horndelta/ids.hpp"
#include "horndelta/parallel.hpp"
#include "horndelta/shapes.hpp"
#include "horndelta/triple_store.hpp"

namespace horndelta {

// An inferred head fact tagged with the rule that produced it.
struct Prediction {
    TermId head = kInvalidTerm;
    TermId sub = kInvalidTerm;
    TermId obj = kInvalidTerm;
    RuleId rule = 0;

    Triple head_fact() const { return Triple{head, sub, obj}; }
    friend auto operator<=>(const Prediction&, const Prediction&) = default;
};

struct PredictionHash {
    std::size_t operator()(const Prediction& p) const {
        return mix64(pack_pair(p.head, p.sub)) ^ mix64(pack_pair(p.obj, p.rule));
    }
};

enum class Position : std::uint8_t { Subject, Object };
enum class GroupSide : std::uint8_t { SubjectGrouped, ObjectGrouped };
enum class FilterStrategy : std::uint8_t { Auto, Broadcast, Join };
enum class JoinStrategy : std::uint8_t { Adaptive, Rules, Facts };

struct JoinConfig {
    std::size_t max_group_size = 30000;
    std::size_t broadcast_threshold = 10'000'000;
    FilterStrategy filter = FilterStrategy::Auto;
    JoinStrategy join = JoinStrategy::Adaptive;
    unsigned workers = 0;  // 0 -> default_worker_count()

    unsigned effective_workers() const { return workers == 0 ? default_worker_count() : workers; }
};

struct JoinStats {
    std::atomic<std::uint64_t> rules_branch{0};
    std::atomic<std::uint64_t> facts_branch{0};
};

// (predicate, entity) adjacency entry; entity is the non-key side of the
// grouped triple.
struct AdjPair {
    TermId pred;
    TermId entity;

    friend auto operator<=>(const AdjPair&, const AdjPair&) = default;
};

struct AdjacencyGroup {
    TermId key = kInvalidTerm;  // the shared-variable binding
    GroupSide side = GroupSide::ObjectGrouped;
    std::uint32_t chunk_index = 0;
    std::uint32_t chunk_count = 1;
    std::vector<AdjPair> pairs;
};

// Exactly the triples of `big` whose term at `position` is in `keys`.
// Strategy only changes the access path: Broadcast scans all facts testing
// membership, Join probes the per-entity index for each key. Auto picks
// Broadcast when |keys| <= broadcast_threshold.
std::vector<Triple> filter_relevant(const TripleStore& big,
                                    const std::unordered_set<TermId>& keys, Position position,
                                    FilterStrategy strategy,
                                    std::size_t broadcast_threshold = 10'000'000);

// Groups facts by subject or object into (pred, other-side) adjacency lists,
// splitting any group larger than m into ceil(n/m) chunks. Chunks of one key
// are emitted consecutively.
std::vector<AdjacencyGroup> group_with_limit(std::span<const Triple> facts, GroupSide side,
                                             std::size_t m);

// Joins one object-grouped list against one subject-grouped list on their
// shared key. Iterates whichever of the rule set and the pair product is
// smaller (Adaptive), or a forced side (Rules / Facts); both directions
// produce identical multisets.
template <class Emit>
void group_join_adaptive(TermId key, std::span<const AdjPair> l1, std::span<const AdjPair> l2,
                         const TemplateRules& rules, JoinStrategy strategy, Emit&& emit,
                         JoinStats* stats = nullptr) {
    (void)key;
    const std::uint64_t pair_product =
        static_cast<std::uint64_t>(l1.size()) * static_cast<std::uint64_t>(l2.size());
    bool use_rules;
    switch (strategy) {
        case JoinStrategy::Rules: use_rules = true; break;
        case JoinStrategy::Facts: use_rules = false; break;
        default: use_rules = static_cast<std::uint64_t>(rules.rules.size()) < pair_product; break;
    }
    if (stats) {
        (use_rules ? stats->rules_branch : stats->facts_branch)
            .fetch_add(1, std::memory_order_relaxed);
    }

    if (use_rules) {
        std::unordered_map<TermId, std::vector<TermId>> preds1;
        std::unordered_map<TermId, std::vector<TermId>> preds2;
        for (const AdjPair& p : l1) preds1[p.pred].push_back(p.entity);
        for (const AdjPair& p : l2) preds2[p.pred].push_back(p.entity);
        for (const CandidateRule* r : rules.rules) {
            auto it1 = preds1.find(r->body1);
            if (it1 == preds1.end()) continue;
            auto it2 = preds2.find(r->body2);
            if (it2 == preds2.end()) continue;
            for (TermId e1 : it1->second) {
                for (TermId e2 : it2->second) {
                    emit(Prediction{r->head, e1, e2, r->id});
                }
            }
        }
    } else {
        for (const AdjPair& p1 : l1) {
            for (const AdjPair& p2 : l2) {
                for (const CandidateRule* r : rules.for_pair(p1.pred, p2.pred)) {
                    emit(Prediction{r->head, p1.entity, p2.entity, r->id});
                }
            }
        }
    }
}

// Seed entity sets restricting a search; null pointer = unrestricted.
struct SeedKeys {
    const std::unordered_set<TermId>* subjects = nullptr;
    const std::unordered_set<TermId>* objects = nullptr;

    static SeedKeys all() { return {}; }
};

// Per-shape rule views, normally the catalog's own; check-update narrows them
// to rules whose head can match the batch.
struct RuleViews {
    std::array<const TemplateRules*, 6> views{};

    static RuleViews of(const RuleCatalog& catalog) {
        RuleViews r;
        for (Shape s : kAllShapes) {
            r.views[static_cast<std::size_t>(s)] = &catalog.shape_rules(s);
        }
        return r;
    }

    const TemplateRules* for_shape(Shape s) const {
        return views[static_cast<std::size_t>(s)];
    }
};

namespace detail {

// Filter with an optional predicate restriction; keys == nullptr means all.
std::vector<Triple> filter_for_search(const TripleStore& big,
                                      const std::unordered_set<TermId>* keys, Position position,
                                      const TemplateRules& rules, bool body1_side,
                                      const JoinConfig& cfg);

inline Position var_position(const AtomSig& sig, Var v) {
    return sig.subject == v ? Position::Subject : Position::Object;
}

inline GroupSide z_group_side(const AtomSig& sig) {
    return sig.subject == Var::Z ? GroupSide::SubjectGrouped : GroupSide::ObjectGrouped;
}

struct GroupedSide {
    std::vector<AdjacencyGroup> groups;
    std::unordered_map<TermId, std::pair<std::uint32_t, std::uint32_t>> by_key;  // offset, count

    void index();
};

}  // namespace detail

// The search kernel: finds every body instantiation in `big` whose head-x
// binding is in seeds.subjects and head-y binding in seeds.objects, for each
// requested shape, and emits the induced predictions as a multiset. Length-2
// shapes apply rules to the filtered facts directly; length-3 shapes filter
// both body sides, group them on the shared variable with the skew limit, and
// run the adaptive group join over every chunk pair per key.
template <class Sink>
void search(const TripleStore& big, const RuleCatalog& catalog, const SeedKeys& seeds,
            const JoinConfig& cfg, Sink&& sink, JoinStats* stats = nullptr,
            const RuleViews* rule_views = nullptr,
            std::span<const Shape> shapes = kAllShapes) {
    RuleViews defaults = rule_views ? *rule_views : RuleViews::of(catalog);
    const unsigned workers = cfg.effective_workers();

    for (Shape shape : shapes) {
        const TemplateRules* rules = defaults.for_shape(shape);
        if (rules == nullptr || rules->empty()) continue;
        const ShapeSig sig = shape_sig(shape);

        if (sig.body_atoms == 1) {
            const Position xpos = detail::var_position(sig.b1, Var::X);
            auto facts = detail::filter_for_search(big, seeds.subjects, xpos, *rules, true, cfg);
            parallel_items(facts.size(), workers, [&](unsigned w, std::size_t i) {
                const Triple& t = facts[i];
                TermId x = xpos == Position::Subject ? t.sub : t.obj;
                TermId y = xpos == Position::Subject ? t.obj : t.sub;
                if (seeds.objects != nullptr && !seeds.objects->contains(y)) return;
                auto it = rules->by_body1.find(t.pred);
                if (it == rules->by_body1.end()) return;
                for (const CandidateRule* r : it->second) {
                    sink(w, Prediction{r->head, x, y, r->id});
                }
            });
            continue;
        }

        const Position x_in_b1 = detail::var_position(sig.b1, Var::X);
        const Position y_in_b2 = detail::var_position(sig.b2, Var::Y);
        auto f1 = detail::filter_for_search(big, seeds.subjects, x_in_b1, *rules, true, cfg);
        auto f2 = detail::filter_for_search(big, seeds.objects, y_in_b2, *rules, false, cfg);
        if (f1.empty() || f2.empty()) continue;

        detail::GroupedSide g1;
        g1.groups = group_with_limit(f1, detail::z_group_side(sig.b1), cfg.max_group_size);
        detail::GroupedSide g2;
        g2.groups = group_with_limit(f2, detail::z_group_side(sig.b2), cfg.max_group_size);
        g2.index();

        // One work item per (g1 chunk, g2 chunk) pair on a shared key.
        std::vector<std::pair<std::uint32_t, std::uint32_t>> items;
        for (std::uint32_t i = 0; i < g1.groups.size(); ++i) {
            auto it = g2.by_key.find(g1.groups[i].key);
            if (it == g2.by_key.end()) continue;
            for (std::uint32_t j = 0; j < it->second.second; ++j) {
                items.emplace_back(i, it->second.first + j);
            }
        }

        parallel_items(items.size(), workers, [&](unsigned w, std::size_t i) {
            const AdjacencyGroup& a = g1.groups[items[i].first];
            const AdjacencyGroup& b = g2.groups[items[i].second];
            group_join_adaptive(a.key, a.pairs, b.pairs, *rules, cfg.join,
                                [&](const Prediction& p) { sink(w, p); }, stats);
        });
    }
}

// Convenience wrapper gathering the emitted multiset into one vector.
std::vector<Prediction> search_collect(const TripleStore& big, const RuleCatalog& catalog,
                                       const SeedKeys& seeds, const JoinConfig& cfg,
                                       JoinStats* stats = nullptr,
                                       const RuleViews* rule_views = nullptr,
                                       std::span<const Shape> shapes = kAllShapes);

}  // namespace horndelta
