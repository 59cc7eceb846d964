#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "horndelta/engine.hpp"
#include "horndelta/synth.hpp"

namespace horndelta {

struct BenchRow {
    std::string scenario;
    std::string variant;
    std::string param;
    double wall_ms = 0.0;
    std::uint64_t checksum = 0;
};

struct BenchInputs {
    const TripleStore& store;
    const RuleCatalog& catalog;
    const Dictionary& dict;
};

// Every scenario times the mining work only (no I/O), reports the median of
// `runs` wall times per variant, and throws ConsistencyError if variants that
// must agree produce different score checksums.

// Batch mining (xconf) under each join strategy: adaptive, rules, facts.
std::vector<BenchRow> bench_join_variants(const BenchInputs& in, const RunConfig& cfg, int runs);

// Batch mining (xconf) across max-group-size values; 0 means unlimited.
std::vector<BenchRow> bench_group_size_sweep(const BenchInputs& in, const RunConfig& cfg,
                                             const std::vector<std::uint64_t>& sizes, int runs);

// One xconf update applied under each filter strategy: auto, broadcast, join.
std::vector<BenchRow> bench_filter_sweep(const BenchInputs& in, const RunConfig& cfg,
                                         double update_fraction, int runs);

// Batch mining on the full KB vs applying one update to a pre-mined base in
// each incremental mode. Checksums are compared within each metric group.
std::vector<BenchRow> bench_incremental_vs_batch(const BenchInputs& in, const RunConfig& cfg,
                                                 double update_fraction, int runs);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace horndelta
