#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "horndelta/ids.hpp"

namespace horndelta {

// Bijective term <-> id mapping. Ids are dense and assigned in first-seen
// order, so two identical input streams produce identical encodings.
class Dictionary {
  public:
    TermId intern(std::string_view term) {
        auto it = forward_.find(term);
        if (it != forward_.end()) return it->second;
        TermId id = static_cast<TermId>(reverse_.size());
        reverse_.emplace_back(term);
        forward_.emplace(reverse_.back(), id);
        return id;
    }

    std::optional<TermId> find(std::string_view term) const {
        auto it = forward_.find(term);
        if (it == forward_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& term(TermId id) const { return reverse_.at(id); }

    std::size_t size() const { return reverse_.size(); }

  private:
    struct SvHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    };
    struct SvEq {
        using is_transparent = void;
        bool operator()(std::string_view a, std::string_view b) const { return a == b; }
    };

    std::unordered_map<std::string, TermId, SvHash, SvEq> forward_;
    std::vector<std::string> reverse_;
};

}  // namespace horndelta
