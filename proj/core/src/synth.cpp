#include "horndelta/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "horndelta/errors.hpp"

namespace horndelta {

namespace {

// Object-role ranks rotate the pool by this much relative to subject-role
// ranks, keeping the two hubs distinct.
constexpr std::uint64_t kObjectRankRotation = 37;

class ZipfSampler {
  public:
    ZipfSampler(std::size_t n, double exponent) : cum_(n) {
        double acc = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            acc += std::pow(static_cast<double>(r + 1), -exponent);
            cum_[r] = acc;
        }
    }

    std::size_t sample(std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> dist(0.0, cum_.back());
        auto it = std::upper_bound(cum_.begin(), cum_.end(), dist(rng));
        if (it == cum_.end()) --it;
        return static_cast<std::size_t>(it - cum_.begin());
    }

  private:
    std::vector<double> cum_;
};

// Cheap full-cycle walk over [0, n): start + k * stride (mod n), stride
// coprime to n. Used to fill duplicate-heavy rows without rejection loops.
struct CycleWalk {
    std::uint64_t start;
    std::uint64_t stride;

    static CycleWalk make(std::uint64_t n, std::uint64_t salt) {
        std::uint64_t start = mix64(salt) % n;
        std::uint64_t stride = n == 1 ? 1 : 1 + mix64(salt ^ 0x5bd1e995u) % (n - 1);
        while (std::gcd(stride, n) != 1) ++stride;
        return {start, stride};
    }

    std::uint64_t at(std::uint64_t k, std::uint64_t n) const {
        return (start + (k % n) * stride) % n;
    }
};

}  // namespace

SynthKb generate_kb(const GenParams& params) {
    if (params.n_entities == 0 || params.n_predicates == 0 || params.n_types == 0) {
        throw ConfigError("entity, predicate and type counts must be positive");
    }
    using u128 = unsigned __int128;
    const u128 capacity = static_cast<u128>(params.n_entities) * params.n_entities *
                          params.n_predicates;
    if (static_cast<u128>(params.n_facts) > capacity) {
        throw ConfigError("infeasible params: n_facts exceeds n_entities^2 * n_predicates");
    }

    std::mt19937_64 rng(params.seed);
    SynthKb kb;

    // Entity pools by type: entity i belongs to type (i % n_types).
    std::vector<std::vector<TermId>> pools(params.n_types);
    std::vector<TermId> entity_ids(params.n_entities);
    for (std::uint64_t i = 0; i < params.n_entities; ++i) {
        entity_ids[i] = kb.dict.intern("e" + std::to_string(i));
        pools[i % params.n_types].push_back(entity_ids[i]);
    }

    std::vector<TermId> pred_ids(params.n_predicates);
    std::vector<PredicateTypes> pred_types(params.n_predicates);
    for (std::uint32_t t = 0; t < params.n_types; ++t) {
        kb.schema.intern_type("t" + std::to_string(t));
    }
    std::uniform_int_distribution<std::uint32_t> type_dist(0, params.n_types - 1);
    kb.schema_text.clear();
    for (std::uint64_t p = 0; p < params.n_predicates; ++p) {
        std::string name = "p" + std::to_string(p);
        pred_ids[p] = kb.dict.intern(name);
        pred_types[p] = {type_dist(rng), type_dist(rng)};
        kb.schema.set(pred_ids[p], pred_types[p]);
        kb.schema_text += name;
        kb.schema_text += '\t';
        kb.schema_text += kb.schema.type_name(pred_types[p].domain);
        kb.schema_text += '\t';
        kb.schema_text += kb.schema.type_name(pred_types[p].range);
        kb.schema_text += '\n';
    }

    // Per-predicate quotas, spilling into later predicates when a predicate's
    // subject x object capacity runs out.
    std::vector<std::uint64_t> quota(params.n_predicates, params.n_facts / params.n_predicates);
    for (std::uint64_t p = 0; p < params.n_facts % params.n_predicates; ++p) quota[p] += 1;

    std::unordered_map<std::size_t, ZipfSampler> samplers;
    auto sampler_for = [&](std::size_t n) -> const ZipfSampler& {
        auto it = samplers.find(n);
        if (it == samplers.end()) {
            it = samplers.emplace(n, ZipfSampler(n, params.skew_exponent)).first;
        }
        return it->second;
    };

    std::unordered_set<Triple, TripleHash> seen;
    seen.reserve(params.n_facts * 2);
    // Per-(pred, sub) walk positions; monotone, so every row slot is visited
    // at most once over the whole run.
    std::unordered_map<std::uint64_t, std::uint64_t> row_cursor;

    std::uint64_t spill = 0;
    std::uint64_t placed_total = 0;
    for (std::uint64_t p = 0; p < params.n_predicates; ++p) {
        const auto& dom_pool = pools[pred_types[p].domain];
        const auto& rng_pool = pools[pred_types[p].range];
        std::uint64_t want = quota[p] + spill;
        spill = 0;
        if (dom_pool.empty() || rng_pool.empty()) {
            spill = want;
            continue;
        }
        const std::uint64_t pred_capacity =
            static_cast<std::uint64_t>(dom_pool.size()) * rng_pool.size();
        std::uint64_t placed = 0;

        const ZipfSampler& sub_zipf = sampler_for(dom_pool.size());
        const ZipfSampler& obj_zipf = sampler_for(rng_pool.size());
        const std::uint64_t rotation = kObjectRankRotation % rng_pool.size();

        // Fill a (pred, sub) row's next free object slot, if any.
        auto fill_row = [&](TermId sub, Triple& out) {
            const std::uint64_t row_key = pack_pair(pred_ids[p], sub);
            CycleWalk walk = CycleWalk::make(rng_pool.size(), row_key ^ params.seed);
            std::uint64_t& k = row_cursor[row_key];
            while (k < rng_pool.size()) {
                Triple cand{pred_ids[p], sub, rng_pool[walk.at(k, rng_pool.size())]};
                ++k;
                if (seen.insert(cand).second) {
                    out = cand;
                    return true;
                }
            }
            return false;
        };

        CycleWalk sub_walk = CycleWalk::make(dom_pool.size(), p ^ params.seed);
        while (placed < want && placed < pred_capacity) {
            TermId sub = dom_pool[sub_zipf.sample(rng)];
            Triple t{pred_ids[p], sub, 0};
            bool committed = false;
            for (int attempt = 0; attempt < 24 && !committed; ++attempt) {
                t.obj = rng_pool[(obj_zipf.sample(rng) + rotation) % rng_pool.size()];
                if (seen.insert(t).second) committed = true;
            }
            // Zipf keeps colliding: take the row's next free slot, then any
            // subject with room (only near saturation).
            if (!committed) committed = fill_row(sub, t);
            for (std::uint64_t s = 0; s < dom_pool.size() && !committed; ++s) {
                committed = fill_row(dom_pool[sub_walk.at(s, dom_pool.size())], t);
            }
            if (!committed) break;  // predicate truly full
            kb.triples.push_back(t);
            ++placed;
            ++placed_total;
        }
        if (placed < want) spill = want - placed;
    }
    if (spill > 0 || placed_total != params.n_facts) {
        throw ConfigError("infeasible params: could not place " + std::to_string(params.n_facts) +
                          " distinct facts under the type pools");
    }

    kb.triples_text.reserve(kb.triples.size() * 16);
    for (const Triple& t : kb.triples) {
        kb.triples_text += kb.dict.term(t.sub);
        kb.triples_text += '\t';
        kb.triples_text += kb.dict.term(t.pred);
        kb.triples_text += '\t';
        kb.triples_text += kb.dict.term(t.obj);
        kb.triples_text += '\n';
    }
    return kb;
}

SplitResult split_updates(std::span<const Triple> kb, const SplitSpec& spec) {
    double sum = spec.base_fraction;
    if (spec.base_fraction < 0.0) throw ConfigError("base fraction must be >= 0");
    for (double f : spec.update_fractions) {
        if (f < 0.0) throw ConfigError("update fractions must be >= 0");
        sum += f;
    }
    if (sum > 1.0 + 1e-9) {
        throw ConfigError("fraction sum exceeds 1");
    }

    std::vector<std::uint32_t> order(kb.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(spec.seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto n = static_cast<double>(kb.size());
    std::size_t cursor = 0;
    auto take = [&](double fraction) {
        auto want = static_cast<std::size_t>(std::llround(fraction * n));
        want = std::min(want, kb.size() - cursor);
        std::vector<Triple> part;
        part.reserve(want);
        for (std::size_t i = 0; i < want; ++i) part.push_back(kb[order[cursor + i]]);
        cursor += want;
        return part;
    };

    SplitResult result;
    result.base = take(spec.base_fraction);
    for (double f : spec.update_fractions) result.updates.push_back(take(f));
    // Rounding leftovers go to the base so the parts partition the input.
    while (cursor < kb.size()) {
        result.base.push_back(kb[order[cursor]]);
        ++cursor;
    }
    return result;
}

}  // namespace horndelta
