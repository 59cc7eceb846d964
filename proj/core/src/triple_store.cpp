#include "horndelta/triple_store.hpp"

#include <algorithm>
#include <fstream>

#include "horndelta/errors.hpp"
#include "horndelta/tsv.hpp"

namespace horndelta {

std::vector<TermId> TripleStore::predicates() const {
    std::unordered_set<TermId> seen;
    for (const Triple& t : facts_) seen.insert(t.pred);
    std::vector<TermId> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

bool TripleStore::add(const Triple& t) {
    if (!fact_set_.insert(t).second) return false;
    auto index = static_cast<std::uint32_t>(facts_.size());
    facts_.push_back(t);
    by_pred_sub_[pack_pair(t.pred, t.sub)].push_back(t.obj);
    by_pred_obj_[pack_pair(t.pred, t.obj)].push_back(t.sub);
    by_sub_[t.sub].push_back(index);
    by_obj_[t.obj].push_back(index);
    return true;
}

void ingest_triples_into(std::istream& in, Dictionary& dict, std::vector<Triple>& out) {
    for_each_data_line(in, [&](std::size_t line, std::string_view text) {
        auto fields = split_tabs(text);
        if (fields.size() != 3) {
            throw ParseError(line, "expected 3 tab-separated fields, got " +
                                       std::to_string(fields.size()));
        }
        for (auto f : fields) {
            if (f.empty()) throw ParseError(line, "empty field");
        }
        Triple t;
        t.sub = dict.intern(fields[0]);
        t.pred = dict.intern(fields[1]);
        t.obj = dict.intern(fields[2]);
        out.push_back(t);
    });
}

IngestResult ingest_triples(std::istream& in) {
    IngestResult result;
    ingest_triples_into(in, result.dictionary, result.triples);
    return result;
}

TripleStore build_store(std::span<const Triple> triples) {
    TripleStore store;
    for (const Triple& t : triples) store.add(t);
    return store;
}

ApplyResult apply_update(TripleStore store, std::span<const Triple> raw) {
    ApplyResult result;
    result.batch.batch_index = store.batch_serial();
    for (const Triple& t : raw) {
        if (store.add(t)) result.batch.facts.push_back(t);
    }
    store.bump_batch_serial();
    result.store = std::move(store);
    return result;
}

namespace {

constexpr std::string_view kSnapshotTag = "horndelta-snapshot";
constexpr std::uint64_t kSnapshotVersion = 1;

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    return in;
}

}  // namespace

void snapshot(const TripleStore& store, const Dictionary& dict, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "manifest.tsv");
        out << kSnapshotTag << '\t' << kSnapshotVersion << '\n';
        out << "terms\t" << dict.size() << '\n';
        out << "facts\t" << store.fact_count() << '\n';
    }
    {
        auto out = open_out(dir / "dictionary.tsv");
        for (std::size_t i = 0; i < dict.size(); ++i) {
            out << dict.term(static_cast<TermId>(i)) << '\n';
        }
    }
    {
        auto out = open_out(dir / "triples.tsv");
        for (const Triple& t : store.facts()) {
            out << t.sub << '\t' << t.pred << '\t' << t.obj << '\n';
        }
    }
}

LoadResult load_snapshot(const std::filesystem::path& dir) {
    std::uint64_t term_count = 0;
    std::uint64_t fact_count = 0;
    {
        auto in = open_in(dir / "manifest.tsv");
        bool tagged = false;
        for_each_data_line(in, [&](std::size_t line, std::string_view text) {
            auto fields = split_tabs(text);
            if (fields.size() != 2) throw ParseError(line, "bad manifest row");
            if (fields[0] == kSnapshotTag) {
                if (parse_u64(fields[1], line) != kSnapshotVersion) {
                    throw IoError("snapshot version mismatch in " + dir.string());
                }
                tagged = true;
            } else if (fields[0] == "terms") {
                term_count = parse_u64(fields[1], line);
            } else if (fields[0] == "facts") {
                fact_count = parse_u64(fields[1], line);
            }
        });
        if (!tagged) throw IoError("not a snapshot directory: " + dir.string());
    }

    LoadResult result;
    {
        auto in = open_in(dir / "dictionary.tsv");
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            result.dictionary.intern(line);
        }
        if (result.dictionary.size() != term_count) {
            throw IoError("snapshot dictionary truncated: " + dir.string());
        }
    }
    {
        auto in = open_in(dir / "triples.tsv");
        for_each_data_line(in, [&](std::size_t line, std::string_view text) {
            auto fields = split_tabs(text);
            if (fields.size() != 3) throw ParseError(line, "bad triple row");
            Triple t;
            t.sub = static_cast<TermId>(parse_u64(fields[0], line));
            t.pred = static_cast<TermId>(parse_u64(fields[1], line));
            t.obj = static_cast<TermId>(parse_u64(fields[2], line));
            result.store.add(t);
        });
        if (result.store.fact_count() != fact_count) {
            throw IoError("snapshot triples truncated: " + dir.string());
        }
    }
    return result;
}

}  // namespace horndelta
