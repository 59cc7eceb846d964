#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace horndelta {

using TermId = std::uint32_t;
using TypeId = std::uint32_t;
using RuleId = std::uint32_t;

inline constexpr TermId kInvalidTerm = 0xffffffffu;

// One (subject, predicate, object) fact, dictionary-encoded.
struct Triple {
    TermId pred = kInvalidTerm;
    TermId sub = kInvalidTerm;
    TermId obj = kInvalidTerm;

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t pack_pair(std::uint32_t hi, std::uint32_t lo) {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

struct TripleHash {
    std::size_t operator()(const Triple& t) const {
        return mix64(pack_pair(t.pred, t.sub)) ^ (mix64(t.obj) << 1);
    }
};

}  // namespace horndelta
