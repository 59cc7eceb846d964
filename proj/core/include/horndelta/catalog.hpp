#pragma once

#include <array>
#include <ostream>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "horndelta/dictionary.hpp"
#include "horndelta/ids.hpp"
#include "horndelta/schema.hpp"
#include "horndelta/shapes.hpp"

namespace horndelta {

// One row of the fixed-column rule table. body2 is kInvalidTerm for
// single-atom shapes.
struct CandidateRule {
    RuleId id = 0;
    Shape shape = Shape::L2_xy;
    TermId head = kInvalidTerm;
    TermId body1 = kInvalidTerm;
    TermId body2 = kInvalidTerm;
};

// Per-shape rule indices used by the join kernel.
struct TemplateRules {
    std::vector<const CandidateRule*> rules;
    std::unordered_map<std::uint64_t, std::vector<const CandidateRule*>> by_pair;
    std::unordered_map<TermId, std::vector<const CandidateRule*>> by_body1;
    std::unordered_map<TermId, std::vector<const CandidateRule*>> by_body2;

    bool empty() const { return rules.empty(); }
    std::span<const CandidateRule* const> for_pair(TermId b1, TermId b2) const {
        auto it = by_pair.find(pack_pair(b1, b2));
        if (it == by_pair.end()) return {};
        return it->second;
    }
};

class RuleCatalog {
  public:
    RuleCatalog() = default;
    RuleCatalog(const RuleCatalog&) = delete;
    RuleCatalog& operator=(const RuleCatalog&) = delete;
    RuleCatalog(RuleCatalog&&) = default;
    RuleCatalog& operator=(RuleCatalog&&) = default;

    std::span<const CandidateRule> rules() const { return rules_; }
    const CandidateRule& rule(RuleId id) const { return rules_.at(id); }
    const PredicateSchema& schema() const { return schema_; }
    bool indexed() const { return indexed_; }

    std::span<const CandidateRule* const> by_body1(TermId p) const { return flat(by_body1_, p); }
    std::span<const CandidateRule* const> by_body2(TermId p) const { return flat(by_body2_, p); }
    std::span<const CandidateRule* const> by_head(TermId p) const { return flat(by_head_, p); }
    std::span<const CandidateRule* const> by_body_pair(TermId b1, TermId b2) const {
        auto it = by_body_pair_.find(pack_pair(b1, b2));
        if (it == by_body_pair_.end()) return {};
        return it->second;
    }

    const TemplateRules& shape_rules(Shape s) const {
        return per_shape_[static_cast<std::size_t>(s)];
    }

    // Sub-view keeping only rules whose head predicate is in `heads`.
    TemplateRules shape_rules_with_heads(Shape s, const std::unordered_set<TermId>& heads) const;

    friend RuleCatalog generate_candidates(const PredicateSchema&, const Dictionary&, int);
    friend void index_catalog(RuleCatalog&);

  private:
    static std::span<const CandidateRule* const> flat(
        const std::unordered_map<TermId, std::vector<const CandidateRule*>>& m, TermId p) {
        auto it = m.find(p);
        if (it == m.end()) return {};
        return it->second;
    }

    std::vector<CandidateRule> rules_;
    PredicateSchema schema_;
    std::unordered_map<TermId, std::vector<const CandidateRule*>> by_body1_;
    std::unordered_map<TermId, std::vector<const CandidateRule*>> by_body2_;
    std::unordered_map<TermId, std::vector<const CandidateRule*>> by_head_;
    std::unordered_map<std::uint64_t, std::vector<const CandidateRule*>> by_body_pair_;
    std::array<TemplateRules, 6> per_shape_;
    bool indexed_ = false;
};

// Ontological path-finding over the schema: emits every shape instance whose
// shared-variable positions have equal types and whose head argument types
// match, excluding the tautology h(x,y) <- h(x,y). Rule ids are dense and
// deterministic (ordered by shape, then head/body predicate names).
RuleCatalog generate_candidates(const PredicateSchema& schema, const Dictionary& dict,
                                int max_len);

void index_catalog(RuleCatalog& catalog);

// `rule_id template head body1 body2` rows, '-' for an absent body2.
void write_candidates(std::ostream& out, const RuleCatalog& catalog, const Dictionary& dict);

}  // namespace horndelta
