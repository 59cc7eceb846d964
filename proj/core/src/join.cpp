#include "horndelta/join.hpp"

#include <algorithm>

#include "horndelta/errors.hpp"

namespace horndelta {

namespace {

bool use_broadcast(FilterStrategy strategy, std::size_t key_count, std::size_t threshold) {
    switch (strategy) {
        case FilterStrategy::Broadcast: return true;
        case FilterStrategy::Join: return false;
        default: return key_count <= threshold;
    }
}

}  // namespace

std::vector<Triple> filter_relevant(const TripleStore& big,
                                    const std::unordered_set<TermId>& keys, Position position,
                                    FilterStrategy strategy, std::size_t broadcast_threshold) {
    std::vector<Triple> out;
    if (keys.empty()) return out;
    if (use_broadcast(strategy, keys.size(), broadcast_threshold)) {
        for (const Triple& t : big.facts()) {
            TermId term = position == Position::Subject ? t.sub : t.obj;
            if (keys.contains(term)) out.push_back(t);
        }
        return out;
    }
    for (TermId key : keys) {
        auto indices = position == Position::Subject ? big.facts_with_subject(key)
                                                     : big.facts_with_object(key);
        for (std::uint32_t i : indices) out.push_back(big.facts()[i]);
    }
    return out;
}

namespace detail {

std::vector<Triple> filter_for_search(const TripleStore& big,
                                      const std::unordered_set<TermId>* keys, Position position,
                                      const TemplateRules& rules, bool body1_side,
                                      const JoinConfig& cfg) {
    const auto& allowed = body1_side ? rules.by_body1 : rules.by_body2;
    std::vector<Triple> out;
    if (keys == nullptr) {
        for (const Triple& t : big.facts()) {
            if (allowed.contains(t.pred)) out.push_back(t);
        }
        return out;
    }
    if (keys->empty()) return out;
    if (use_broadcast(cfg.filter, keys->size(), cfg.broadcast_threshold)) {
        for (const Triple& t : big.facts()) {
            if (!allowed.contains(t.pred)) continue;
            TermId term = position == Position::Subject ? t.sub : t.obj;
            if (keys->contains(term)) out.push_back(t);
        }
        return out;
    }
    for (TermId key : *keys) {
        auto indices = position == Position::Subject ? big.facts_with_subject(key)
                                                     : big.facts_with_object(key);
        for (std::uint32_t i : indices) {
            const Triple& t = big.facts()[i];
            if (allowed.contains(t.pred)) out.push_back(t);
        }
    }
    return out;
}

void GroupedSide::index() {
    by_key.reserve(groups.size());
    std::uint32_t i = 0;
    while (i < static_cast<std::uint32_t>(groups.size())) {
        std::uint32_t count = groups[i].chunk_count;
        by_key.emplace(groups[i].key, std::make_pair(i, count));
        i += count;
    }
}

}  // namespace detail

std::vector<AdjacencyGroup> group_with_limit(std::span<const Triple> facts, GroupSide side,
                                             std::size_t m) {
    if (m < 1) throw ConfigError("max group size must be >= 1");

    std::unordered_map<TermId, std::vector<AdjPair>> buckets;
    for (const Triple& t : facts) {
        if (side == GroupSide::ObjectGrouped) {
            buckets[t.obj].push_back({t.pred, t.sub});
        } else {
            buckets[t.sub].push_back({t.pred, t.obj});
        }
    }

    std::vector<AdjacencyGroup> groups;
    groups.reserve(buckets.size());
    for (auto& [key, pairs] : buckets) {
        const std::size_t n = pairs.size();
        const auto chunk_count = static_cast<std::uint32_t>((n + m - 1) / m);
        if (chunk_count <= 1) {
            AdjacencyGroup g;
            g.key = key;
            g.side = side;
            g.pairs = std::move(pairs);
            groups.push_back(std::move(g));
            continue;
        }
        for (std::uint32_t c = 0; c < chunk_count; ++c) {
            AdjacencyGroup g;
            g.key = key;
            g.side = side;
            g.chunk_index = c;
            g.chunk_count = chunk_count;
            std::size_t begin = static_cast<std::size_t>(c) * m;
            std::size_t end = std::min(n, begin + m);
            g.pairs.assign(pairs.begin() + begin, pairs.begin() + end);
            groups.push_back(std::move(g));
        }
    }
    return groups;
}

std::vector<Prediction> search_collect(const TripleStore& big, const RuleCatalog& catalog,
                                       const SeedKeys& seeds, const JoinConfig& cfg,
                                       JoinStats* stats, const RuleViews* rule_views,
                                       std::span<const Shape> shapes) {
    const unsigned workers = cfg.effective_workers();
    std::vector<std::vector<Prediction>> partials(std::max(1u, workers));
    search(big, catalog, seeds, cfg,
           [&](unsigned w, const Prediction& p) { partials[w].push_back(p); }, stats, rule_views,
           shapes);
    std::vector<Prediction> out;
    std::size_t total = 0;
    for (const auto& part : partials) total += part.size();
    out.reserve(total);
    for (auto& part : partials) {
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

}  // namespace horndelta
