#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "horndelta/dictionary.hpp"
#include "horndelta/ids.hpp"

namespace horndelta {

// Facts not already present in the store at apply time, deduplicated.
struct UpdateBatch {
    std::vector<Triple> facts;
    std::uint64_t batch_index = 0;
};

// The cumulated KB. Value-semantic: apply_update consumes a store and returns
// the extended one; a published store is never mutated, so any number of
// readers may share it while the driver prepares the next version.
class TripleStore {
  public:
    TripleStore() = default;

    bool contains(const Triple& t) const { return fact_set_.contains(t); }
    std::size_t fact_count() const { return facts_.size(); }
    std::span<const Triple> facts() const { return facts_; }
    std::uint64_t batch_serial() const { return batch_serial_; }

    // (predicate, subject) -> objects
    std::span<const TermId> objects_of(TermId pred, TermId sub) const {
        return lookup(by_pred_sub_, pack_pair(pred, sub));
    }
    // (predicate, object) -> subjects
    std::span<const TermId> subjects_of(TermId pred, TermId obj) const {
        return lookup(by_pred_obj_, pack_pair(pred, obj));
    }
    // subject -> indices into facts()
    std::span<const std::uint32_t> facts_with_subject(TermId sub) const {
        return lookup(by_sub_, sub);
    }
    std::span<const std::uint32_t> facts_with_object(TermId obj) const {
        return lookup(by_obj_, obj);
    }

    // Set of predicates with at least one fact.
    std::vector<TermId> predicates() const;

    // Inserts if absent; keeps all indices consistent.
    bool add(const Triple& t);

    void bump_batch_serial() { ++batch_serial_; }

  private:
    template <class Map, class Key>
    static std::span<const typename Map::mapped_type::value_type> lookup(const Map& m,
                                                                         const Key& k) {
        auto it = m.find(k);
        if (it == m.end()) return {};
        return it->second;
    }

    std::vector<Triple> facts_;
    std::unordered_set<Triple, TripleHash> fact_set_;
    std::unordered_map<std::uint64_t, std::vector<TermId>> by_pred_sub_;
    std::unordered_map<std::uint64_t, std::vector<TermId>> by_pred_obj_;
    std::unordered_map<TermId, std::vector<std::uint32_t>> by_sub_;
    std::unordered_map<TermId, std::vector<std::uint32_t>> by_obj_;
    std::uint64_t batch_serial_ = 0;
};

struct IngestResult {
    Dictionary dictionary;
    std::vector<Triple> triples;
};

// Parses `subject<TAB>predicate<TAB>object` rows. Duplicates are preserved;
// deduplication happens at store construction.
IngestResult ingest_triples(std::istream& in);
void ingest_triples_into(std::istream& in, Dictionary& dict, std::vector<Triple>& out);

TripleStore build_store(std::span<const Triple> triples);

struct ApplyResult {
    TripleStore store;
    UpdateBatch batch;
};

// Drops raw triples already present (and internal duplicates); the engine
// always operates on the returned cleaned batch.
ApplyResult apply_update(TripleStore store, std::span<const Triple> raw);

void snapshot(const TripleStore& store, const Dictionary& dict, const std::filesystem::path& dir);

struct LoadResult {
    TripleStore store;
    Dictionary dictionary;
};

LoadResult load_snapshot(const std::filesystem::path& dir);

}  // namespace horndelta
