#pragma once

#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "horndelta/dictionary.hpp"
#include "horndelta/ids.hpp"

namespace horndelta {

struct PredicateTypes {
    TypeId domain = 0;
    TypeId range = 0;

    friend bool operator==(const PredicateTypes&, const PredicateTypes&) = default;
};

// Predicate -> (domain type, range type). Types live in their own small id
// space, separate from KB terms.
class PredicateSchema {
  public:
    TypeId intern_type(std::string_view name) {
        auto it = type_ids_.find(std::string(name));
        if (it != type_ids_.end()) return it->second;
        TypeId id = static_cast<TypeId>(type_names_.size());
        type_names_.emplace_back(name);
        type_ids_.emplace(type_names_.back(), id);
        return id;
    }

    void set(TermId predicate, PredicateTypes types) { entries_[predicate] = types; }

    const PredicateTypes* find(TermId predicate) const {
        auto it = entries_.find(predicate);
        return it == entries_.end() ? nullptr : &it->second;
    }

    const std::unordered_map<TermId, PredicateTypes>& entries() const { return entries_; }
    const std::string& type_name(TypeId id) const { return type_names_.at(id); }
    std::size_t type_count() const { return type_names_.size(); }

  private:
    std::unordered_map<TermId, PredicateTypes> entries_;
    std::vector<std::string> type_names_;
    std::unordered_map<std::string, TypeId> type_ids_;
};

// Parses `predicate<TAB>domain_type<TAB>range_type` rows. Consistent duplicate
// rows are tolerated; conflicting ones are an error.
PredicateSchema parse_schema(std::istream& in, Dictionary& dict);

}  // namespace horndelta
