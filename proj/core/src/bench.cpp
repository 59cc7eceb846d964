#include "horndelta/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>

#include "horndelta/errors.hpp"

namespace horndelta {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return xs[xs.size() / 2];
}

struct Timed {
    std::uint64_t checksum;
    double wall_ms;
};

template <class Fn>
Timed time_call(Fn&& fn) {
    auto t0 = Clock::now();
    std::uint64_t c = fn();
    auto t1 = Clock::now();
    return {c, std::chrono::duration<double, std::milli>(t1 - t0).count()};
}

// Runs fn `runs` times; fn times its own region of interest and returns the
// checksum of its output. All runs of one variant must agree.
template <class Fn>
BenchRow measure(const std::string& scenario, const std::string& variant,
                 const std::string& param, int runs, Fn&& fn) {
    std::vector<double> times;
    std::uint64_t checksum = 0;
    for (int r = 0; r < runs; ++r) {
        Timed t = fn();
        times.push_back(t.wall_ms);
        if (r == 0) {
            checksum = t.checksum;
        } else if (t.checksum != checksum) {
            throw ConsistencyError("bench variant '" + variant + "' is nondeterministic");
        }
    }
    return {scenario, variant, param, median(std::move(times)), checksum};
}

void require_equal_checksums(const std::vector<BenchRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].checksum != rows[0].checksum) {
            throw ConsistencyError("bench scenario '" + rows[0].scenario + "': variant '" +
                                   rows[i].variant + "' diverged from '" + rows[0].variant + "'");
        }
    }
}

std::uint64_t mine_checksum(const BenchInputs& in, const JoinConfig& cfg) {
    MineOptions opts;
    opts.metric = Metric::Xconf;
    MineResult result = mine_batch(in.store, in.catalog, in.dict, cfg, opts);
    return score_checksum(emit_scores(*result.scores.xconf, in.catalog, in.dict));
}

}  // namespace

std::vector<BenchRow> bench_join_variants(const BenchInputs& in, const RunConfig& cfg, int runs) {
    std::vector<BenchRow> rows;
    const std::string param = std::to_string(cfg.max_group_size);
    for (auto [strategy, name] : {std::pair{JoinStrategy::Adaptive, "adaptive"},
                                  std::pair{JoinStrategy::Rules, "rules"},
                                  std::pair{JoinStrategy::Facts, "facts"}}) {
        JoinConfig jc = cfg.join_config();
        jc.join = strategy;
        rows.push_back(measure("join-variants", name, param, runs,
                               [&] { return time_call([&] { return mine_checksum(in, jc); }); }));
    }
    require_equal_checksums(rows);
    return rows;
}

std::vector<BenchRow> bench_group_size_sweep(const BenchInputs& in, const RunConfig& cfg,
                                             const std::vector<std::uint64_t>& sizes, int runs) {
    std::vector<BenchRow> rows;
    for (std::uint64_t m : sizes) {
        JoinConfig jc = cfg.join_config();
        jc.max_group_size = m == 0 ? std::size_t{1} << 62 : m;
        std::string name = m == 0 ? "m=unlimited" : "m=" + std::to_string(m);
        std::string param = m == 0 ? "unlimited" : std::to_string(m);
        rows.push_back(measure("group-size-sweep", name, param, runs,
                               [&] { return time_call([&] { return mine_checksum(in, jc); }); }));
    }
    require_equal_checksums(rows);
    return rows;
}

namespace {

struct UpdateFixture {
    TripleStore base;
    TripleStore updated;
    UpdateBatch batch;
};

UpdateFixture make_update_fixture(const BenchInputs& in, double update_fraction,
                                  std::uint64_t seed) {
    SplitSpec spec;
    spec.base_fraction = 1.0 - update_fraction;
    spec.update_fractions = {update_fraction};
    spec.seed = seed;
    SplitResult split = split_updates(in.store.facts(), spec);

    UpdateFixture fx;
    fx.base = build_store(split.base);
    auto applied = apply_update(fx.base, split.updates.at(0));
    fx.updated = std::move(applied.store);
    fx.batch = std::move(applied.batch);
    return fx;
}

std::uint64_t update_delta_checksum(const BenchInputs& in, const UpdateFixture& fx,
                                    const JoinConfig& cfg) {
    auto delta_i = inc_infer(fx.base, fx.batch, in.catalog, cfg);
    ScoreDelta delta = infer_update_xconf(delta_i, fx.base, cfg);
    delta.merge(check_update_xconf(fx.batch, fx.updated, in.catalog, cfg));

    std::vector<std::pair<RuleId, Counter>> cells(delta.cells().begin(), delta.cells().end());
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& [rule, c] : cells) {
        h = mix64(h ^ rule);
        h = mix64(h ^ c.numerator);
        h = mix64(h ^ c.denominator);
    }
    return h;
}

}  // namespace

std::vector<BenchRow> bench_filter_sweep(const BenchInputs& in, const RunConfig& cfg,
                                         double update_fraction, int runs) {
    UpdateFixture fx = make_update_fixture(in, update_fraction, cfg.seed);
    char param[32];
    std::snprintf(param, sizeof(param), "%g", update_fraction);

    std::vector<BenchRow> rows;
    for (auto [strategy, name] : {std::pair{FilterStrategy::Auto, "auto"},
                                  std::pair{FilterStrategy::Broadcast, "broadcast"},
                                  std::pair{FilterStrategy::Join, "join"}}) {
        JoinConfig jc = cfg.join_config();
        jc.filter = strategy;
        rows.push_back(measure("filter-sweep", name, param, runs, [&] {
            return time_call([&] { return update_delta_checksum(in, fx, jc); });
        }));
    }
    require_equal_checksums(rows);
    return rows;
}

std::vector<BenchRow> bench_incremental_vs_batch(const BenchInputs& in, const RunConfig& cfg,
                                                 double update_fraction, int runs) {
    SplitSpec spec;
    spec.base_fraction = 1.0 - update_fraction;
    spec.update_fractions = {update_fraction};
    spec.seed = cfg.seed;
    SplitResult split = split_updates(in.store.facts(), spec);
    char param[32];
    std::snprintf(param, sizeof(param), "%g", update_fraction);

    std::vector<BenchRow> rows;
    for (auto [metric, name] :
         {std::pair{Metric::Stdconf, "batch-stdconf"}, std::pair{Metric::Xconf, "batch-xconf"}}) {
        rows.push_back(measure("incremental-vs-batch", name, param, runs, [&] {
            return time_call([&] {
                MineOptions opts;
                opts.metric = metric;
                MineResult result =
                    mine_batch(in.store, in.catalog, in.dict, cfg.join_config(), opts);
                const ScoreTable& table =
                    metric == Metric::Stdconf ? *result.scores.stdconf : *result.scores.xconf;
                return score_checksum(emit_scores(table, in.catalog, in.dict));
            });
        }));
    }

    for (Mode mode : {Mode::Vanilla, Mode::Search, Mode::Xconf}) {
        // The seeded base state models an already-mined session; cloning it is
        // setup, only apply_batch is timed.
        EngineState init = engine_init(in.dict, in.catalog.schema(), mode, cfg, split.base);
        rows.push_back(
            measure("incremental-vs-batch", std::string(mode_name(mode)), param, runs, [&] {
                EngineState state;
                state.dict = init.dict;
                state.store = init.store;
                state.catalog = generate_candidates(in.catalog.schema(), init.dict, cfg.max_len);
                index_catalog(state.catalog);
                state.mode = mode;
                state.config = cfg;
                state.scores = init.scores;
                state.intermediate = init.intermediate;
                Timed t = time_call([&] {
                    apply_batch(state, split.updates.at(0));
                    return std::uint64_t{0};
                });
                t.checksum = score_checksum(emit_scores(state.scores, state.catalog, state.dict));
                return t;
            }));
    }

    auto checksum_of = [&](std::string_view variant) {
        for (const BenchRow& r : rows) {
            if (r.variant == variant) return r.checksum;
        }
        throw ConsistencyError("missing bench variant " + std::string(variant));
    };
    for (const char* variant : {"vanilla", "search"}) {
        if (checksum_of(variant) != checksum_of("batch-stdconf")) {
            throw ConsistencyError(std::string("incremental-vs-batch: '") + variant +
                                   "' diverged from batch stdconf");
        }
    }
    if (checksum_of("xconf") != checksum_of("batch-xconf")) {
        throw ConsistencyError("incremental-vs-batch: 'xconf' diverged from batch xconf");
    }
    return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "scenario,variant,update_fraction_or_param,wall_ms,output_checksum\n";
    for (const BenchRow& r : rows) {
        char line[256];
        std::snprintf(line, sizeof(line), "%s,%s,%s,%.3f,%016" PRIx64 "\n", r.scenario.c_str(),
                      r.variant.c_str(), r.param.c_str(), r.wall_ms, r.checksum);
        out << line;
    }
}

}  // namespace horndelta
