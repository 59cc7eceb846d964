#pragma once

#include <vector>

#include "horndelta/catalog.hpp"
#include "horndelta/join.hpp"
#include "horndelta/scores.hpp"
#include "horndelta/triple_store.hpp"

namespace horndelta {

// Deliberately slow reference miner: nested enumeration of fact pairs per
// rule over a plain per-predicate partition, with ordered-set membership for
// head checks. Shares nothing with the search/join/filter path; intended for
// KBs of a few thousand facts.
std::vector<Prediction> brute_force_predictions(const TripleStore& store,
                                                const RuleCatalog& catalog);

ScoreSet brute_force_scores(const TripleStore& store, const RuleCatalog& catalog, Metric metric);

}  // namespace horndelta
