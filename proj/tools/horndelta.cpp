#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "horndelta/batch.hpp"
#include "horndelta/bench.hpp"
#include "horndelta/catalog.hpp"
#include "horndelta/engine.hpp"
#include "horndelta/errors.hpp"
#include "horndelta/oracle.hpp"
#include "horndelta/state_io.hpp"
#include "horndelta/synth.hpp"

namespace hd = horndelta;
namespace fs = std::filesystem;

namespace {

struct Knobs {
    int max_len = 3;
    std::uint64_t max_group_size = 30000;
    std::uint64_t broadcast_threshold = 10'000'000;
    std::uint64_t min_support = 0;
    double min_confidence = 0.0;
    std::string filter = "auto";
    std::string join = "adaptive";
    unsigned workers = 0;
    std::uint64_t seed = 1;
};

void add_knob_flags(CLI::App* cmd, Knobs& k) {
    cmd->add_option("--max-len", k.max_len, "Maximum rule length (head plus body atoms)")
        ->check(CLI::Range(2, 3))
        ->capture_default_str();
    cmd->add_option("--max-group-size", k.max_group_size, "Skew limit m for adjacency groups")
        ->capture_default_str();
    cmd->add_option("--broadcast-threshold", k.broadcast_threshold,
                    "Key-set size at which auto filtering switches to join")
        ->capture_default_str();
    cmd->add_option("--filter-strategy", k.filter, "Entity filtering strategy")
        ->check(CLI::IsMember({"auto", "broadcast", "join"}))
        ->capture_default_str();
    cmd->add_option("--join-strategy", k.join, "Group join iteration side")
        ->check(CLI::IsMember({"adaptive", "rules", "facts"}))
        ->capture_default_str();
    cmd->add_option("--min-support", k.min_support, "Minimum numerator for emitted rules")
        ->capture_default_str();
    cmd->add_option("--min-confidence", k.min_confidence, "Minimum confidence for emitted rules")
        ->capture_default_str();
    cmd->add_option("--workers", k.workers, "Worker threads (0 = HORN_DELTA_WORKERS or hardware)")
        ->capture_default_str();
    cmd->add_option("--seed", k.seed, "RNG seed for anything randomized")->capture_default_str();
}

hd::FilterStrategy parse_filter(const std::string& s) {
    if (s == "broadcast") return hd::FilterStrategy::Broadcast;
    if (s == "join") return hd::FilterStrategy::Join;
    return hd::FilterStrategy::Auto;
}

hd::JoinStrategy parse_join(const std::string& s) {
    if (s == "rules") return hd::JoinStrategy::Rules;
    if (s == "facts") return hd::JoinStrategy::Facts;
    return hd::JoinStrategy::Adaptive;
}

hd::Metric parse_metric(const std::string& s) {
    if (s == "stdconf") return hd::Metric::Stdconf;
    if (s == "xconf") return hd::Metric::Xconf;
    return hd::Metric::Both;
}

hd::RunConfig to_config(const Knobs& k) {
    hd::RunConfig cfg;
    cfg.max_len = k.max_len;
    cfg.max_group_size = k.max_group_size;
    cfg.broadcast_threshold = k.broadcast_threshold;
    cfg.min_support = k.min_support;
    cfg.min_confidence = k.min_confidence;
    cfg.filter = parse_filter(k.filter);
    cfg.join = parse_join(k.join);
    cfg.workers = k.workers;
    cfg.seed = k.seed;
    return cfg;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hd::IoError("cannot read " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hd::IoError("cannot write " + path);
    return out;
}

struct LoadedKb {
    hd::Dictionary dict;
    hd::TripleStore store;
    hd::RuleCatalog catalog;
};

LoadedKb load_kb(const std::string& kb_path, const std::string& schema_path, int max_len) {
    LoadedKb out;
    std::vector<hd::Triple> triples;
    {
        auto in = open_input(kb_path);
        hd::ingest_triples_into(in, out.dict, triples);
    }
    hd::PredicateSchema schema;
    {
        auto in = open_input(schema_path);
        schema = hd::parse_schema(in, out.dict);
    }
    out.store = hd::build_store(triples);
    out.catalog = hd::generate_candidates(schema, out.dict, max_len);
    hd::index_catalog(out.catalog);
    return out;
}

void write_scores_file(const std::string& path, const std::vector<std::string>& rows) {
    if (path.empty()) {
        hd::write_rows(std::cout, rows);
        return;
    }
    auto out = open_output(path);
    hd::write_rows(out, rows);
}

void write_triples_file(const std::string& path, std::span<const hd::Triple> triples,
                        const hd::Dictionary& dict) {
    auto out = open_output(path);
    for (const hd::Triple& t : triples) {
        out << dict.term(t.sub) << '\t' << dict.term(t.pred) << '\t' << dict.term(t.obj) << '\n';
    }
}

int run(int argc, char** argv) {
    CLI::App app{"horndelta: incremental Horn-rule mining over triple KBs"};
    app.require_subcommand(1);

    auto* rules = app.add_subcommand("rules", "Candidate rule catalog operations");
    rules->require_subcommand(1);
    auto* rules_gen = rules->add_subcommand("gen", "Generate the candidate rule set");
    std::string rg_schema, rg_out;
    Knobs rg_knobs;
    rules_gen->add_option("--schema", rg_schema, "Predicate schema TSV")->required();
    rules_gen->add_option("-o,--output", rg_out, "Candidate TSV path (default stdout)");
    add_knob_flags(rules_gen, rg_knobs);
    rules_gen->callback([&] {
        hd::Dictionary dict;
        auto in = open_input(rg_schema);
        hd::PredicateSchema schema = hd::parse_schema(in, dict);
        hd::RuleCatalog catalog = hd::generate_candidates(schema, dict, rg_knobs.max_len);
        hd::index_catalog(catalog);
        if (rg_out.empty()) {
            hd::write_candidates(std::cout, catalog, dict);
        } else {
            auto out = open_output(rg_out);
            hd::write_candidates(out, catalog, dict);
        }
    });

    auto* mine = app.add_subcommand("mine", "Mining commands");
    mine->require_subcommand(1);

    auto* mine_batch = mine->add_subcommand("batch", "Mine a whole KB from scratch");
    std::string mb_kb, mb_schema, mb_out, mb_metric = "stdconf", mb_inter_out;
    Knobs mb_knobs;
    mine_batch->add_option("--kb", mb_kb, "Triple TSV")->required();
    mine_batch->add_option("--schema", mb_schema, "Predicate schema TSV")->required();
    mine_batch->add_option("--metric", mb_metric, "Metric(s) to compute")
        ->check(CLI::IsMember({"stdconf", "xconf", "both"}))
        ->capture_default_str();
    mine_batch->add_option("-o,--output", mb_out, "Score TSV path (default stdout)");
    mine_batch->add_option("--intermediate-out", mb_inter_out,
                           "Also write the distinct prediction set");
    add_knob_flags(mine_batch, mb_knobs);
    mine_batch->callback([&] {
        LoadedKb kb = load_kb(mb_kb, mb_schema, mb_knobs.max_len);
        hd::RunConfig cfg = to_config(mb_knobs);
        hd::MineOptions opts;
        opts.metric = parse_metric(mb_metric);
        opts.materialize_intermediate = !mb_inter_out.empty();
        hd::MineResult result =
            hd::mine_batch(kb.store, kb.catalog, kb.dict, cfg.join_config(), opts);
        hd::EmitOptions emit{cfg.min_support, cfg.min_confidence};
        write_scores_file(mb_out, hd::emit_scores(result.scores, kb.catalog, kb.dict, emit));
        if (!mb_inter_out.empty()) {
            auto out = open_output(mb_inter_out);
            for (const hd::Prediction& p : result.intermediate) {
                out << p.head << '\t' << p.sub << '\t' << p.obj << '\t' << p.rule << '\n';
            }
        }
    });

    auto* mine_oracle = mine->add_subcommand("oracle", "Slow brute-force reference miner");
    std::string mo_kb, mo_schema, mo_out, mo_metric = "stdconf";
    Knobs mo_knobs;
    mine_oracle->add_option("--kb", mo_kb, "Triple TSV")->required();
    mine_oracle->add_option("--schema", mo_schema, "Predicate schema TSV")->required();
    mine_oracle->add_option("--metric", mo_metric, "Metric(s) to compute")
        ->check(CLI::IsMember({"stdconf", "xconf", "both"}))
        ->capture_default_str();
    mine_oracle->add_option("-o,--output", mo_out, "Score TSV path (default stdout)");
    add_knob_flags(mine_oracle, mo_knobs);
    mine_oracle->callback([&] {
        LoadedKb kb = load_kb(mo_kb, mo_schema, mo_knobs.max_len);
        hd::validate_coverage(kb.store, kb.catalog, kb.dict);
        hd::ScoreSet scores = hd::brute_force_scores(kb.store, kb.catalog, parse_metric(mo_metric));
        hd::EmitOptions emit{mo_knobs.min_support, mo_knobs.min_confidence};
        write_scores_file(mo_out, hd::emit_scores(scores, kb.catalog, kb.dict, emit));
    });

    auto* mine_init = mine->add_subcommand("init", "Start an incremental mining session");
    std::string mi_state, mi_schema, mi_kb, mi_mode = "search";
    Knobs mi_knobs;
    mine_init->add_option("--state", mi_state, "Session directory to create")->required();
    mine_init->add_option("--schema", mi_schema, "Predicate schema TSV")->required();
    mine_init->add_option("--mode", mi_mode, "Incremental variant")
        ->check(CLI::IsMember({"vanilla", "search", "xconf"}))
        ->capture_default_str();
    mine_init->add_option("--kb", mi_kb, "Optional base KB mined from scratch as the seed");
    add_knob_flags(mine_init, mi_knobs);
    mine_init->callback([&] {
        fs::path dir(mi_state);
        if (fs::exists(dir) && !fs::is_empty(dir)) {
            throw hd::IoError("state directory already exists: " + mi_state);
        }
        hd::Dictionary dict;
        std::vector<hd::Triple> base;
        if (!mi_kb.empty()) {
            auto in = open_input(mi_kb);
            hd::ingest_triples_into(in, dict, base);
        }
        std::string schema_text = hd::read_file(mi_schema);
        std::istringstream schema_in(schema_text);
        hd::PredicateSchema schema = hd::parse_schema(schema_in, dict);
        hd::EngineState state = hd::engine_init(std::move(dict), schema,
                                                *hd::mode_from_name(mi_mode),
                                                to_config(mi_knobs), base);
        hd::save_state(state, dir, schema_text);
    });

    auto* mine_update = mine->add_subcommand("update", "Apply one batch to a session");
    std::string mu_state, mu_batch, mu_mode;
    Knobs mu_knobs;
    mine_update->add_option("--state", mu_state, "Session directory")->required();
    mine_update->add_option("--batch", mu_batch, "Batch triple TSV")->required();
    mine_update->add_option("--mode", mu_mode, "Must match the session mode when given")
        ->check(CLI::IsMember({"vanilla", "search", "xconf"}));
    add_knob_flags(mine_update, mu_knobs);
    mine_update->callback([&] {
        fs::path dir(mu_state);
        hd::EngineState state = hd::load_state(dir);
        if (!mu_mode.empty() && *hd::mode_from_name(mu_mode) != state.mode) {
            throw hd::ConfigError("session mode is '" + std::string(hd::mode_name(state.mode)) +
                                  "', not '" + mu_mode + "'");
        }
        hd::RunConfig knobs = to_config(mu_knobs);
        if (mine_update->count("--max-group-size")) state.config.max_group_size = knobs.max_group_size;
        if (mine_update->count("--broadcast-threshold")) {
            state.config.broadcast_threshold = knobs.broadcast_threshold;
        }
        if (mine_update->count("--filter-strategy")) state.config.filter = knobs.filter;
        if (mine_update->count("--join-strategy")) state.config.join = knobs.join;
        if (mine_update->count("--workers")) state.config.workers = knobs.workers;

        std::string bytes = hd::read_file(mu_batch);
        std::string hash = hd::batch_content_hash(bytes);
        for (const std::string& applied : state.applied_batches) {
            if (applied == hash) {
                throw hd::ConfigError("batch already applied to this session: " + mu_batch);
            }
        }

        std::vector<hd::Triple> raw;
        std::istringstream in(bytes);
        hd::ingest_triples_into(in, state.dict, raw);
        hd::ScoreDelta delta = hd::apply_batch(state, raw);
        state.applied_batches.push_back(hash);

        std::string schema_text = hd::read_file(dir / "schema.tsv");
        hd::save_state(state, dir, schema_text);
        hd::write_delta_file(dir, state.applied_batches.size(), delta,
                             hd::mode_metric(state.mode), state.catalog, state.dict);
        std::cerr << "applied batch " << state.applied_batches.size() << " (" << raw.size()
                  << " rows)\n";
    });

    auto* synth = app.add_subcommand("synth", "Synthetic KB tooling");
    synth->require_subcommand(1);

    auto* synth_gen = synth->add_subcommand("gen", "Generate a skewed synthetic KB");
    hd::GenParams gp;
    std::string sg_out;
    synth_gen->add_option("--entities", gp.n_entities)->capture_default_str();
    synth_gen->add_option("--predicates", gp.n_predicates)->capture_default_str();
    synth_gen->add_option("--facts", gp.n_facts)->capture_default_str();
    synth_gen->add_option("--skew", gp.skew_exponent, "Power-law exponent for entity ranks")
        ->capture_default_str();
    synth_gen->add_option("--types", gp.n_types)->capture_default_str();
    synth_gen->add_option("--seed", gp.seed)->capture_default_str();
    synth_gen->add_option("-o,--output", sg_out, "Output directory")->required();
    synth_gen->callback([&] {
        std::cerr << "seed = " << gp.seed << '\n';
        hd::SynthKb kb = hd::generate_kb(gp);
        fs::path dir(sg_out);
        fs::create_directories(dir);
        open_output((dir / "schema.tsv").string()) << kb.schema_text;
        open_output((dir / "kb.tsv").string()) << kb.triples_text;
        auto manifest = open_output((dir / "manifest.tsv").string());
        manifest << "horndelta-synth\t1\n"
                 << "entities\t" << gp.n_entities << '\n'
                 << "predicates\t" << gp.n_predicates << '\n'
                 << "facts\t" << gp.n_facts << '\n'
                 << "skew\t" << gp.skew_exponent << '\n'
                 << "types\t" << gp.n_types << '\n'
                 << "seed\t" << gp.seed << '\n';
    });

    auto* synth_split = synth->add_subcommand("split", "Split a KB into base and update batches");
    std::string ss_kb, ss_out;
    hd::SplitSpec spec;
    synth_split->add_option("--kb", ss_kb, "Triple TSV")->required();
    synth_split->add_option("--base-fraction", spec.base_fraction)->capture_default_str();
    synth_split
        ->add_option("--update-fractions", spec.update_fractions,
                     "Comma-separated batch fractions")
        ->delimiter(',')
        ->required();
    synth_split->add_option("--seed", spec.seed)->capture_default_str();
    synth_split->add_option("-o,--output", ss_out, "Output directory")->required();
    synth_split->callback([&] {
        std::cerr << "seed = " << spec.seed << '\n';
        auto in = open_input(ss_kb);
        hd::IngestResult kb = hd::ingest_triples(in);
        hd::SplitResult split = hd::split_updates(kb.triples, spec);
        fs::path dir(ss_out);
        fs::create_directories(dir);
        write_triples_file((dir / "base.tsv").string(), split.base, kb.dictionary);
        auto manifest = open_output((dir / "manifest.tsv").string());
        manifest << "horndelta-split\t1\n"
                 << "seed\t" << spec.seed << '\n'
                 << "base\t" << split.base.size() << '\n';
        for (std::size_t i = 0; i < split.updates.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "update_%03zu.tsv", i + 1);
            write_triples_file((dir / name).string(), split.updates[i], kb.dictionary);
            manifest << "update\t" << split.updates[i].size() << '\n';
        }
    });

    auto* bench = app.add_subcommand("bench", "Timing harnesses");
    bench->require_subcommand(1);
    auto* bench_run = bench->add_subcommand("run", "Run one benchmark scenario");
    std::string br_scenario, br_kb, br_schema, br_out;
    double br_fraction = 0.1;
    int br_runs = 3;
    std::vector<std::uint64_t> br_sizes = {1000, 5000, 30000, 0};
    Knobs br_knobs;
    bench_run
        ->add_option("scenario", br_scenario,
                     "join-variants | group-size-sweep | filter-sweep | incremental-vs-batch")
        ->required()
        ->check(CLI::IsMember(
            {"join-variants", "group-size-sweep", "filter-sweep", "incremental-vs-batch"}));
    bench_run->add_option("--kb", br_kb, "Triple TSV")->required();
    bench_run->add_option("--schema", br_schema, "Predicate schema TSV")->required();
    bench_run->add_option("--update-fraction", br_fraction)->capture_default_str();
    bench_run->add_option("--runs", br_runs, "Runs per variant; the median is reported")
        ->capture_default_str();
    bench_run->add_option("--group-sizes", br_sizes, "Sweep values, 0 = unlimited")
        ->delimiter(',');
    bench_run->add_option("-o,--output", br_out, "Timing CSV path (default stdout)");
    add_knob_flags(bench_run, br_knobs);
    bench_run->callback([&] {
        std::cerr << "seed = " << br_knobs.seed << '\n';
        LoadedKb kb = load_kb(br_kb, br_schema, br_knobs.max_len);
        hd::RunConfig cfg = to_config(br_knobs);
        hd::BenchInputs inputs{kb.store, kb.catalog, kb.dict};
        std::vector<hd::BenchRow> rows;
        if (br_scenario == "join-variants") {
            rows = hd::bench_join_variants(inputs, cfg, br_runs);
        } else if (br_scenario == "group-size-sweep") {
            rows = hd::bench_group_size_sweep(inputs, cfg, br_sizes, br_runs);
        } else if (br_scenario == "filter-sweep") {
            rows = hd::bench_filter_sweep(inputs, cfg, br_fraction, br_runs);
        } else {
            rows = hd::bench_incremental_vs_batch(inputs, cfg, br_fraction, br_runs);
        }
        if (br_out.empty()) {
            hd::write_bench_csv(std::cout, rows);
        } else {
            auto out = open_output(br_out);
            hd::write_bench_csv(out, rows);
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const hd::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
