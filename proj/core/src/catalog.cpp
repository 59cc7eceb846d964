#include "horndelta/catalog.hpp"

#include <algorithm>

#include "horndelta/errors.hpp"

namespace horndelta {

namespace {

// Type of the entity sitting at x/y/z inside one body atom, given the head
// predicate's (domain, range).
struct HeadTypes {
    TypeId x;
    TypeId y;
};

bool atom_types_ok(const AtomSig& sig, const PredicateTypes& body, HeadTypes head,
                   TypeId* z_out) {
    auto check = [&](Var v, TypeId have) {
        switch (v) {
            case Var::X: return have == head.x;
            case Var::Y: return have == head.y;
            case Var::Z: *z_out = have; return true;
        }
        return false;
    };
    return check(sig.subject, body.domain) && check(sig.object, body.range);
}

}  // namespace

RuleCatalog generate_candidates(const PredicateSchema& schema, const Dictionary& dict,
                                int max_len) {
    if (max_len != 2 && max_len != 3) {
        throw ConfigError("max_len must be 2 or 3, got " + std::to_string(max_len));
    }

    std::vector<TermId> preds;
    preds.reserve(schema.entries().size());
    for (const auto& [pred, _] : schema.entries()) preds.push_back(pred);
    std::sort(preds.begin(), preds.end(),
              [&](TermId a, TermId b) { return dict.term(a) < dict.term(b); });

    RuleCatalog catalog;
    catalog.schema_ = schema;

    for (Shape shape : kAllShapes) {
        const ShapeSig sig = shape_sig(shape);
        if (sig.body_atoms == 2 && max_len < 3) continue;
        for (TermId head : preds) {
            const PredicateTypes& ht = *schema.find(head);
            const HeadTypes head_types{ht.domain, ht.range};
            for (TermId b1 : preds) {
                if (shape == Shape::L2_xy && b1 == head) continue;  // tautology
                TypeId z1 = 0;
                if (!atom_types_ok(sig.b1, *schema.find(b1), head_types, &z1)) continue;
                if (sig.body_atoms == 1) {
                    catalog.rules_.push_back({0, shape, head, b1, kInvalidTerm});
                    continue;
                }
                for (TermId b2 : preds) {
                    TypeId z2 = 0;
                    if (!atom_types_ok(sig.b2, *schema.find(b2), head_types, &z2)) continue;
                    if (z1 != z2) continue;
                    catalog.rules_.push_back({0, shape, head, b1, b2});
                }
            }
        }
    }

    // preds is already name-sorted, so emission order is canonical; assign ids.
    for (std::size_t i = 0; i < catalog.rules_.size(); ++i) {
        catalog.rules_[i].id = static_cast<RuleId>(i);
    }
    return catalog;
}

void index_catalog(RuleCatalog& catalog) {
    catalog.by_body1_.clear();
    catalog.by_body2_.clear();
    catalog.by_head_.clear();
    catalog.by_body_pair_.clear();
    for (auto& shape_rules : catalog.per_shape_) shape_rules = {};

    for (const CandidateRule& r : catalog.rules_) {
        catalog.by_body1_[r.body1].push_back(&r);
        catalog.by_head_[r.head].push_back(&r);
        TemplateRules& tr = catalog.per_shape_[static_cast<std::size_t>(r.shape)];
        tr.rules.push_back(&r);
        tr.by_body1[r.body1].push_back(&r);
        if (r.body2 != kInvalidTerm) {
            catalog.by_body2_[r.body2].push_back(&r);
            catalog.by_body_pair_[pack_pair(r.body1, r.body2)].push_back(&r);
            tr.by_body2[r.body2].push_back(&r);
            tr.by_pair[pack_pair(r.body1, r.body2)].push_back(&r);
        }
    }
    catalog.indexed_ = true;
}

TemplateRules RuleCatalog::shape_rules_with_heads(
    Shape s, const std::unordered_set<TermId>& heads) const {
    const TemplateRules& full = shape_rules(s);
    TemplateRules view;
    for (const CandidateRule* r : full.rules) {
        if (!heads.contains(r->head)) continue;
        view.rules.push_back(r);
        view.by_body1[r->body1].push_back(r);
        if (r->body2 != kInvalidTerm) {
            view.by_body2[r->body2].push_back(r);
            view.by_pair[pack_pair(r->body1, r->body2)].push_back(r);
        }
    }
    return view;
}

void write_candidates(std::ostream& out, const RuleCatalog& catalog, const Dictionary& dict) {
    for (const CandidateRule& r : catalog.rules()) {
        out << r.id << '\t' << shape_name(r.shape) << '\t' << dict.term(r.head) << '\t'
            << dict.term(r.body1) << '\t';
        if (r.body2 == kInvalidTerm) {
            out << '-';
        } else {
            out << dict.term(r.body2);
        }
        out << '\n';
    }
}

}  // namespace horndelta
