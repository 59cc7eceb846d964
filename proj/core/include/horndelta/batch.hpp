#pragma once

#include <vector>

#include "horndelta/catalog.hpp"
#include "horndelta/join.hpp"
#include "horndelta/scores.hpp"
#include "horndelta/triple_store.hpp"

namespace horndelta {

struct MineOptions {
    Metric metric = Metric::Stdconf;
    // Also return the deduplicated prediction set (seeds vanilla-mode runs).
    bool materialize_intermediate = false;
};

struct MineResult {
    ScoreSet scores;
    std::vector<Prediction> intermediate;  // sorted distinct predictions when requested
};

// Throws SchemaError naming every store predicate missing from the schema.
void validate_coverage(const TripleStore& store, const RuleCatalog& catalog,
                       const Dictionary& dict);

// Whole-KB mining: one search pass with unrestricted seeds. stdconf counts
// distinct predicted (x, y) pairs per rule; xconf counts body instantiations.
// Output is invariant under every JoinConfig knob.
MineResult mine_batch(const TripleStore& store, const RuleCatalog& catalog,
                      const Dictionary& dict, const JoinConfig& cfg, const MineOptions& opts);

}  // namespace horndelta
