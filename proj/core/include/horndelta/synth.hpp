#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "horndelta/dictionary.hpp"
#include "horndelta/ids.hpp"
#include "horndelta/schema.hpp"

namespace horndelta {

struct GenParams {
    std::uint64_t n_entities = 1000;
    std::uint64_t n_predicates = 20;
    std::uint64_t n_facts = 10000;
    double skew_exponent = 1.5;
    std::uint32_t n_types = 3;
    std::uint64_t seed = 1;
};

struct SynthKb {
    Dictionary dict;
    std::vector<Triple> triples;
    PredicateSchema schema;
    std::string schema_text;   // ready-to-write TSV
    std::string triples_text;  // ready-to-write TSV
};

// Deterministic synthetic KB with zipfian entity usage in both roles.
// Entities are partitioned into type pools; each predicate draws a
// (domain, range) type pair, subjects and objects are zipf-sampled within the
// pools, and duplicate facts are resolved by walking a seeded permutation so
// exactly n_facts distinct triples come out. Object-role ranks rotate the
// pool, so the heaviest object key has a modest but nonzero subject degree
// and group joins stay output-bounded.
SynthKb generate_kb(const GenParams& params);

struct SplitSpec {
    double base_fraction = 0.9;
    std::vector<double> update_fractions;
    std::uint64_t seed = 1;
};

struct SplitResult {
    std::vector<Triple> base;
    std::vector<std::vector<Triple>> updates;
};

// Uniform random disjoint split, deterministic under the seed. Rounding
// leftovers stay in the base so the parts always partition the input.
SplitResult split_updates(std::span<const Triple> kb, const SplitSpec& spec);

}  // namespace horndelta
