#include "gazeaes/cli/app.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "gazeaes/cli/cache.hpp"
#include "gazeaes/cli/manifest.hpp"
#include "gazeaes/corpus/embeddings.hpp"
#include "gazeaes/corpus/loader.hpp"
#include "gazeaes/corpus/vocabulary.hpp"
#include "gazeaes/experiments/experiment.hpp"
#include "gazeaes/experiments/report.hpp"
#include "gazeaes/numerics/random.hpp"
#include "gazeaes/util/kv_file.hpp"
#include "gazeaes/util/strings.hpp"

namespace gazeaes::cli {

namespace {

namespace fs = std::filesystem;
using Values = std::map<std::string, std::string>;

/// Problems found before any output is written.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::set<std::string> kDataKeys{"data.essays",  "data.metadata", "data.placeholders", "data.has_header",
                                      "data.corpus",  "data.gaze",     "data.gaze_csv",     "data.readers"};
const std::set<std::string> kGazeKeys{"gaze.stats_fold"};

struct Options {
    std::string config;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::string out;
    bool dry_run = false;
    bool force = false;

    std::string essays, metadata, placeholders, embeddings;
    std::string corpus, gaze, gaze_csv, readers;
    std::vector<std::string> attributes;
    std::vector<std::string> reports;
    bool compare = false;
};

struct Context {
    std::string command;
    Options opts;
    CLI::App* sub = nullptr;
    std::optional<std::string> data_dir;
    std::optional<fs::path> config_path;
    Values values;  // resolved, before path resolution of data.* keys
    experiments::ExperimentConfig config;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
    bool started = false;

    bool flag_given(const std::string& name) const { return sub->count(name) > 0; }

    std::optional<fs::path> path(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end() || it->second.empty()) return std::nullopt;
        fs::path p(it->second);
        if (p.is_relative() && data_dir) p = fs::path(*data_dir) / p;
        return p;
    }

    fs::path require_path(const std::string& key, const std::string& flag) const {
        auto p = path(key);
        if (!p) throw UsageError(command + " needs " + key + " (or " + flag + ")");
        if (!fs::exists(*p)) throw UsageError(key + ": " + p->string() + " does not exist");
        return *p;
    }
};

Values resolve_values(Context& c) {
    Values v;
    if (!c.opts.config.empty()) {
        c.config_path = fs::path(c.opts.config);
        if (!fs::exists(*c.config_path)) throw UsageError("config file " + c.opts.config + " does not exist");
        v = util::KeyValueFile::load(*c.config_path).values();
    }
    for (const auto& o : c.opts.overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects KEY=VALUE, got '" + o + "'");
        v[std::string(util::trim(o.substr(0, eq)))] = std::string(util::trim(o.substr(eq + 1)));
    }
    auto shortcut = [&](const std::string& value, const char* key) {
        if (!value.empty()) v[key] = value;
    };
    shortcut(c.opts.essays, "data.essays");
    shortcut(c.opts.metadata, "data.metadata");
    shortcut(c.opts.placeholders, "data.placeholders");
    shortcut(c.opts.embeddings, "experiment.embeddings");
    shortcut(c.opts.corpus, "data.corpus");
    shortcut(c.opts.gaze, "data.gaze");
    shortcut(c.opts.gaze_csv, "data.gaze_csv");
    shortcut(c.opts.readers, "data.readers");
    if (c.flag_given("--seed")) v["experiment.seed"] = std::to_string(c.opts.seed);
    if (c.flag_given("--jobs")) v["experiment.jobs"] = std::to_string(c.opts.jobs);

    for (const auto& [key, value] : v) {
        if (util::starts_with(key, "experiment.") || util::starts_with(key, "model.") ||
            util::starts_with(key, "train.")) {
            continue;
        }
        if (!kDataKeys.count(key) && !kGazeKeys.count(key)) throw UsageError("unknown configuration key '" + key + "'");
    }
    return v;
}

experiments::ExperimentConfig build_config(const Context& c) {
    Values model_keys;
    for (const auto& [k, v] : c.values) {
        if (!util::starts_with(k, "data.") && !util::starts_with(k, "gaze.")) model_keys[k] = v;
    }
    try {
        auto config = experiments::ExperimentConfig::from_map(model_keys);
        if (config.embeddings && config.embeddings->is_relative() && c.data_dir) {
            config.embeddings = fs::path(*c.data_dir) / *config.embeddings;
        }
        config.validate();
        return config;
    } catch (const std::exception& e) {
        throw UsageError(std::string("configuration: ") + e.what());
    }
}

/// Every resolved option: the experiment config plus data.* and gaze.* keys
/// with paths resolved.
Values resolved_options(const Context& c) {
    auto m = c.config.to_map();
    for (const auto& [k, v] : c.values) {
        if (util::starts_with(k, "data.") || util::starts_with(k, "gaze.")) {
            const auto p = kDataKeys.count(k) && k != "data.has_header" ? c.path(k) : std::nullopt;
            m[k] = p ? p->string() : v;
        }
    }
    return m;
}

/// Creates the output directory and writes the manifest (and the resolved
/// configuration) before anything else.
void begin_output(Context& c, const std::vector<std::pair<std::string, fs::path>>& inputs) {
    if (c.opts.out.empty()) throw UsageError(c.command + " needs --out");
    RunManifest m;
    m.command = c.command;
    m.config_path = c.config_path;
    m.options = resolved_options(c);
    m.seed = c.config.seed;
    m.output_dir = fs::path(c.opts.out);
    m.data_dir = c.data_dir;
    m.dry_run = c.opts.dry_run;
    if (c.config_path) m.inputs.push_back({"--config", *c.config_path, sha256_file(*c.config_path)});
    for (const auto& [role, p] : inputs) {
        m.inputs.push_back({role, p, fs::is_directory(p) ? sha256_directory(p) : sha256_file(p)});
    }
    try {
        prepare_output_dir(m.output_dir, c.opts.force);
    } catch (const OutputDirError& e) {
        throw UsageError(e.what());
    }
    write_manifest(m);
    c.started = true;
    std::ofstream resolved(m.output_dir / "resolved_config.txt");
    for (const auto& [k, v] : m.options) resolved << k << " = " << v << '\n';
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

// ---------------------------------------------------------------- preprocess

int cmd_preprocess(Context& c) {
    const auto essays_path = c.require_path("data.essays", "--essays");
    std::vector<std::pair<std::string, fs::path>> inputs{{"data.essays", essays_path}};
    corpus::SetTable sets = corpus::asap_essay_sets();
    corpus::EssayLoadOptions load;
    if (auto p = c.path("data.metadata")) {
        inputs.emplace_back("data.metadata", c.require_path("data.metadata", "--metadata"));
        sets = corpus::load_set_metadata(*p);
    }
    if (auto p = c.path("data.placeholders")) {
        inputs.emplace_back("data.placeholders", c.require_path("data.placeholders", "--placeholders"));
        load.placeholders = corpus::load_placeholder_map(*p);
    }
    if (auto it = c.values.find("data.has_header"); it != c.values.end()) {
        const auto v = util::to_lower(it->second);
        if (v != "true" && v != "false") throw UsageError("data.has_header must be true or false");
        load.has_header = v == "true";
    }
    if (c.config.embeddings) {
        if (!fs::exists(*c.config.embeddings)) {
            throw UsageError("experiment.embeddings: " + c.config.embeddings->string() + " does not exist");
        }
        inputs.emplace_back("experiment.embeddings", *c.config.embeddings);
    }

    begin_output(c, inputs);
    if (c.opts.dry_run) return kExitOk;
    const fs::path dir(c.opts.out);

    auto loaded = corpus::load_essays(essays_path, sets, load);
    {
        auto diag = open_out(dir / "diagnostics.txt");
        for (const auto& d : loaded.diagnostics) diag << d << '\n';
    }
    if (loaded.essays.empty()) {
        throw std::runtime_error("no essays loaded from " + essays_path.string() + " (" +
                                 std::to_string(loaded.malformed_rows) + " malformed, " +
                                 std::to_string(loaded.rejected_rows) + " rejected rows)");
    }

    CorpusCache cache;
    cache.sets = sets;
    cache.essays = std::move(loaded.essays);
    std::map<int, std::vector<long long>> ids;
    for (const auto& e : cache.essays) ids[e.set_id].push_back(e.essay_id);
    std::vector<std::string> skipped;
    for (const auto& [set_id, list] : ids) {
        if (list.size() < static_cast<std::size_t>(experiments::kFoldCount)) {
            skipped.push_back("set " + std::to_string(set_id) + " has " + std::to_string(list.size()) +
                              " essays; no folds generated");
            continue;
        }
        cache.folds[set_id] = experiments::make_folds(
            list, set_id, derive_seed(c.config.seed, "folds:" + std::to_string(set_id)));
    }
    write_corpus_cache(dir, cache);

    std::map<long long, const corpus::Essay*> by_id;
    for (const auto& e : cache.essays) by_id.emplace(e.essay_id, &e);
    fs::create_directories(dir / "vocab");
    auto coverage = open_out(dir / "coverage.tsv");
    coverage << "set\tfold\ttrain_essays\tvocab_size\tembedding_coverage\n";
    for (const auto& [set_id, folds] : cache.folds) {
        for (const auto& f : folds) {
            corpus::TaggedEssays train{corpus::Role::train, {}};
            for (long long id : f.train) train.essays.push_back(by_id.at(id));
            const auto vocab = corpus::build_vocab(train, c.config.model.vocab_size);
            auto vf = open_out(dir / "vocab" / ("set" + std::to_string(set_id) + "_fold" +
                                                std::to_string(f.fold_id) + ".txt"));
            vocab.write(vf);
            coverage << set_id << '\t' << f.fold_id << '\t' << f.train.size() << '\t' << vocab.size() << '\t';
            if (c.config.embeddings) {
                const auto table = corpus::load_embeddings(*c.config.embeddings, vocab, c.config.model.embedding_dim,
                                                           derive_seed(c.config.seed, "embeddings"));
                coverage << util::format_fixed(table.coverage, 4);
            } else {
                coverage << '-';
            }
            coverage << '\n';
        }
    }

    std::ostringstream summary;
    std::size_t total = 0;
    for (const auto& [set_id, n] : loaded.counts_per_set) {
        summary << "set " << set_id << ": " << n << " essays\n";
        total += n;
    }
    summary << "total: " << total << " essays\n";
    summary << "malformed rows: " << loaded.malformed_rows << "\n";
    summary << "rejected rows: " << loaded.rejected_rows << "\n";
    for (const auto& s : skipped) summary << "warning: " << s << '\n';
    auto sf = open_out(dir / "summary.txt");
    sf << summary.str();
    *c.out << summary.str();
    return kExitOk;
}

// ------------------------------------------------------------------ bin-gaze

int cmd_bin_gaze(Context& c) {
    const auto corpus_dir = c.require_path("data.corpus", "--corpus");
    const auto gaze_path = c.require_path("data.gaze_csv", "--gaze-csv");
    std::vector<std::pair<std::string, fs::path>> inputs{{"data.corpus", corpus_dir}, {"data.gaze_csv", gaze_path}};
    CorpusCache cache;
    try {
        cache = read_corpus_cache(corpus_dir);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    gaze::ReaderTable readers;
    if (c.path("data.readers")) {
        const auto p = c.require_path("data.readers", "--readers");
        inputs.emplace_back("data.readers", p);
        readers = gaze::load_reader_metadata(p);
    }
    int stats_fold = 0;
    if (auto it = c.values.find("gaze.stats_fold"); it != c.values.end()) {
        const auto v = util::parse_int(it->second);
        if (!v || *v < 0 || *v >= experiments::kFoldCount) throw UsageError("gaze.stats_fold must be 0-4");
        stats_fold = static_cast<int>(*v);
    }
    if (c.config.reader_filter.kind == gaze::ReaderFilter::Kind::native_only && readers.empty()) {
        throw UsageError("experiment.readers = native_only needs reader metadata (data.readers)");
    }

    begin_output(c, inputs);
    if (c.opts.dry_run) return kExitOk;
    const fs::path dir(c.opts.out);

    auto loaded = gaze::load_gaze_csv(gaze_path);
    std::vector<std::string> errors = loaded.diagnostics;
    const std::size_t input_rows = loaded.records.size() + loaded.rejected_rows;
    for (const auto& r : loaded.records) {
        if (!readers.count(r.reader_id)) readers[r.reader_id] = {r.reader_id, false, {}};
    }
    const auto records = gaze::filter_readers(loaded.records, c.config.reader_filter, readers);

    // Reader statistics come from the training partition of one fold.
    std::set<long long> train_ids;
    for (const auto& [set_id, folds] : cache.folds) {
        const auto& f = folds.at(static_cast<std::size_t>(stats_fold));
        train_ids.insert(f.train.begin(), f.train.end());
    }
    corpus::TaggedEssays train{corpus::Role::train, {}};
    std::map<long long, const corpus::Essay*> by_id;
    for (const auto& e : cache.essays) {
        by_id.emplace(e.essay_id, &e);
        if (train_ids.count(e.essay_id)) train.essays.push_back(&e);
    }
    std::vector<std::string> warnings;
    const auto stats = gaze::training_reader_stats(records, train, &warnings);
    auto binned = gaze::bin_all(records, stats, cache.essays);
    for (const auto& d : binned.diagnostics) errors.push_back(d);

    std::vector<gaze::GazeRecord> aligned;
    for (const auto& r : records) {
        auto it = by_id.find(r.essay_id);
        if (it != by_id.end() && stats.count(r.reader_id) && r.ia_index < it->second->token_count()) {
            aligned.push_back(r);
        }
    }
    gaze::ReaderTable emitted;
    for (const auto& r : aligned) emitted[r.reader_id] = readers.at(r.reader_id);

    {
        auto f = open_out(dir / "records.csv");
        gaze::write_gaze_csv(f, aligned);
    }
    {
        auto f = open_out(dir / "readers.csv");
        write_readers_csv(f, emitted);
    }
    {
        auto f = open_out(dir / "reader_stats.tsv");
        write_reader_stats_tsv(f, stats);
    }
    {
        auto f = open_out(dir / "alignment_errors.txt");
        for (const auto& e : errors) f << e << '\n';
    }
    fs::create_directories(dir / "labels");
    for (const auto& [key, b] : binned.binned) {
        auto f = open_out(dir / "labels" / (std::to_string(key.first) + "_" + key.second + ".tsv"));
        write_label_file(f, *by_id.at(key.first), b);
    }

    if (input_rows == 0) warnings.push_back("gaze file " + gaze_path.string() + " has no records");
    for (const auto& w : warnings) *c.err << "warning: " << w << '\n';
    *c.out << "readers: " << stats.size() << ", aligned records: " << aligned.size() << " of " << input_rows
           << ", label files: " << binned.binned.size() << ", alignment errors: " << errors.size() << '\n';
    if (input_rows > 0 && aligned.empty()) {
        *c.err << "error: no gaze rows could be aligned; see " << (dir / "alignment_errors.txt").string() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

// ------------------------------------------- train, run, ablate, gridsearch

struct Loaded {
    experiments::ExperimentData data;
    std::vector<std::pair<std::string, fs::path>> inputs;
};

Loaded load_experiment_inputs(const Context& c) {
    Loaded l;
    const auto corpus_dir = c.require_path("data.corpus", "--corpus");
    l.inputs.emplace_back("data.corpus", corpus_dir);
    CorpusCache cache;
    try {
        cache = read_corpus_cache(corpus_dir);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    l.data.sets = std::move(cache.sets);
    l.data.essays = std::move(cache.essays);
    l.data.folds = std::move(cache.folds);

    const bool needs_gaze = experiments::uses_gaze(c.config.system) || experiments::augments_training(c.config.system);
    if (needs_gaze) {
        const auto gaze_dir = c.require_path("data.gaze", "--gaze");
        l.inputs.emplace_back("data.gaze", gaze_dir);
        try {
            auto bundle = read_gaze_bundle(gaze_dir);
            l.data.gaze_records = std::move(bundle.records);
            l.data.readers = std::move(bundle.readers);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }
    if (c.config.embeddings) {
        if (!fs::exists(*c.config.embeddings)) {
            throw UsageError("experiment.embeddings: " + c.config.embeddings->string() + " does not exist");
        }
        l.inputs.emplace_back("experiment.embeddings", *c.config.embeddings);
    }
    try {
        experiments::preflight(c.config, l.data);
    } catch (const std::exception& e) {
        throw UsageError(std::string("configuration: ") + e.what());
    }
    return l;
}

/// Saves a report (and its failures) under `dir`; returns the failure count.
std::size_t save_with_failures(const fs::path& dir, const experiments::ExperimentReport& report, std::ostream& err) {
    experiments::save_report(dir, report);
    if (!report.failures.empty()) {
        auto f = open_out(dir / "failures.txt");
        for (const auto& line : report.failures) {
            f << line << '\n';
            err << "failed job: " << line << '\n';
        }
    }
    return report.failures.size();
}

void print_summary(std::ostream& out, const experiments::ExperimentReport& report) {
    const experiments::ExperimentReport* one[] = {&report};
    experiments::write_summary_table(out, one);
}

int finish(const Context& c, std::size_t failures, std::size_t jobs) {
    if (failures == 0) return kExitOk;
    *c.err << "error: " << failures << " of " << jobs << " jobs failed\n";
    return kExitFailure;
}

int cmd_run(Context& c, bool keep_models) {
    auto l = load_experiment_inputs(c);
    begin_output(c, l.inputs);
    if (c.opts.dry_run) return kExitOk;
    const fs::path dir(c.opts.out);
    const auto report = experiments::run_experiment(c.config, l.data, {keep_models, true});
    const auto failed = save_with_failures(dir, report, *c.err);
    if (keep_models) {
        for (const auto& f : report.folds) {
            const auto sub = dir / "models" / ("set" + std::to_string(f.set_id) + "_fold" + std::to_string(f.fold_id));
            fs::create_directories(sub);
            numerics::save_checkpoint(sub / "model.ckpt", *f.checkpoint);
            auto vf = open_out(sub / "vocab.txt");
            f.vocab->write(vf);
        }
    }
    print_summary(*c.out, report);
    return finish(c, failed, report.folds.size() + failed);
}

int cmd_ablate(Context& c) {
    if (!experiments::uses_gaze(c.config.system)) {
        throw UsageError("ablate needs a gaze system, not " + experiments::to_string(c.config.system));
    }
    std::vector<gaze::GazeAttribute> attributes;
    if (c.opts.attributes.empty()) {
        attributes = c.config.resolved_model().gaze_attributes;
    } else {
        for (const auto& a : c.opts.attributes) {
            try {
                attributes.push_back(gaze::parse_gaze_attribute(a));
            } catch (const std::exception& e) {
                throw UsageError(e.what());
            }
        }
    }
    for (auto a : attributes) {
        auto probe = c.config;
        probe.ablate_attribute = a;
        try {
            probe.validate();
        } catch (const std::exception& e) {
            throw UsageError(std::string("configuration: ") + e.what());
        }
    }
    auto l = load_experiment_inputs(c);
    begin_output(c, l.inputs);
    if (c.opts.dry_run) return kExitOk;
    const fs::path dir(c.opts.out);

    auto full_config = c.config;
    full_config.ablate_attribute.reset();
    const auto full = experiments::run_experiment(full_config, l.data, {false, true});
    std::size_t failed = save_with_failures(dir / "full", full, *c.err);
    std::size_t jobs = full.folds.size() + full.failures.size();

    std::vector<experiments::AblationReport> ablations;
    for (auto a : attributes) {
        auto config = c.config;
        config.ablate_attribute = a;
        experiments::AblationReport r;
        r.attribute = a;
        r.full = full;
        r.ablated = experiments::run_experiment(config, l.data, {false, true});
        failed += save_with_failures(dir / ("ablate_" + std::string(gaze::short_name(a))), r.ablated, *c.err);
        jobs += r.ablated.folds.size() + r.ablated.failures.size();
        for (const auto& [set_id, q] : r.full.mean_qwk) {
            auto it = r.ablated.mean_qwk.find(set_id);
            if (it != r.ablated.mean_qwk.end()) r.delta_qwk[set_id] = q - it->second;
        }
        r.delta_grand_mean = r.full.grand_mean_qwk - r.ablated.grand_mean_qwk;
        ablations.push_back(std::move(r));
    }
    {
        auto f = open_out(dir / "ablation.txt");
        experiments::write_ablation_table(f, ablations);
    }
    {
        auto f = open_out(dir / "ablation.tsv");
        experiments::write_ablation_tsv(f, ablations);
    }
    experiments::write_ablation_table(*c.out, ablations);
    return finish(c, failed, jobs);
}

int cmd_gridsearch(Context& c) {
    if (!experiments::uses_gaze(c.config.system)) {
        throw UsageError("gridsearch needs a gaze system, not " + experiments::to_string(c.config.system));
    }
    auto l = load_experiment_inputs(c);
    begin_output(c, l.inputs);
    if (c.opts.dry_run) return kExitOk;
    const fs::path dir(c.opts.out);
    training::GridSearchResult result;
    try {
        result = experiments::grid_search(c.config, l.data);
    } catch (const std::exception& e) {
        auto f = open_out(dir / "failures.txt");
        f << e.what() << '\n';
        throw;
    }
    {
        auto f = open_out(dir / "grid_search.txt");
        experiments::write_grid_search(f, result);
    }
    {
        auto f = open_out(dir / "best_weights.txt");
        for (const auto& [a, w] : result.best_weights) {
            f << "model.gaze_weight." << gaze::short_name(a) << " = " << util::format_double(w) << '\n';
        }
    }
    {
        auto f = open_out(dir / "cells.tsv");
        f << "index\tattribute\tweight\tfold\tseed\tdev_gaze_mse\n";
        for (const auto& cell : result.cells) {
            f << cell.index << '\t' << gaze::short_name(cell.attribute) << '\t' << util::format_double(cell.weight)
              << '\t' << cell.fold << '\t' << cell.seed << '\t' << util::format_double(cell.dev_gaze_mse) << '\n';
        }
    }
    experiments::write_grid_search(*c.out, result);
    return kExitOk;
}

// -------------------------------------------------------------------- report

int cmd_report(Context& c) {
    if (c.opts.reports.empty()) throw UsageError("report needs at least one report directory");
    if (c.opts.compare && c.opts.reports.size() < 2) throw UsageError("--compare needs two or more reports");
    std::vector<std::pair<std::string, fs::path>> inputs;
    std::vector<experiments::ExperimentReport> reports;
    for (const auto& r : c.opts.reports) {
        const fs::path p(r);
        if (!fs::is_directory(p)) throw UsageError("report directory " + r + " does not exist");
        inputs.emplace_back("report", p);
        try {
            reports.push_back(experiments::load_report(p));
        } catch (const std::exception& e) {
            throw UsageError(r + ": " + e.what());
        }
    }
    std::vector<std::pair<std::size_t, experiments::Comparison>> comparisons;
    if (c.opts.compare) {
        for (std::size_t i = 1; i < reports.size(); ++i) {
            try {
                comparisons.emplace_back(i, experiments::compare(reports[0], reports[i]));
            } catch (const std::exception& e) {
                throw UsageError("cannot compare " + c.opts.reports[0] + " with " + c.opts.reports[i] + ": " +
                                 e.what());
            }
        }
    }
    const bool to_dir = !c.opts.out.empty();
    if (to_dir) begin_output(c, inputs);
    if (c.opts.dry_run) return kExitOk;

    std::vector<const experiments::ExperimentReport*> ptrs;
    for (const auto& r : reports) ptrs.push_back(&r);
    std::ostringstream text;
    experiments::write_summary_table(text, ptrs);
    for (const auto& [i, cmp] : comparisons) {
        text << '\n';
        experiments::write_comparison(text, cmp);
    }
    *c.out << text.str();
    if (to_dir) {
        const fs::path dir(c.opts.out);
        auto f = open_out(dir / "summary.txt");
        f << text.str();
        auto tsv = open_out(dir / "summary.tsv");
        experiments::write_summary_tsv(tsv, ptrs);
    }
    return kExitOk;
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "Key-value configuration file");
    sub->add_option("--set", o.overrides, "Override a configuration key (KEY=VALUE); repeatable");
    sub->add_option("--seed", o.seed, "Master seed (experiment.seed)");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--jobs", o.jobs, "Parallel fold or grid jobs (experiment.jobs)")->check(CLI::PositiveNumber);
    sub->add_flag("--dry-run", o.dry_run, "Write the manifest and resolved configuration only");
    sub->add_flag("--force", o.force, "Overwrite an existing output directory");
}

void add_experiment_inputs(CLI::App* sub, Options& o) {
    sub->add_option("--corpus", o.corpus, "Corpus cache from preprocess (data.corpus)");
    sub->add_option("--gaze", o.gaze, "Gaze bundle from bin-gaze (data.gaze)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Essay scoring with gaze-based multi-task learning", "gazeaes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());
    Options o;

    auto* preprocess = app.add_subcommand("preprocess", "Tokenize essays, generate folds and vocabularies");
    add_common(preprocess, o);
    preprocess->add_option("--essays", o.essays, "ASAP-format TSV (data.essays)");
    preprocess->add_option("--metadata", o.metadata, "Set metadata file (data.metadata)");
    preprocess->add_option("--placeholders", o.placeholders, "Placeholder map (data.placeholders)");
    preprocess->add_option("--embeddings", o.embeddings, "Word vectors for the coverage report");

    auto* bin = app.add_subcommand("bin-gaze", "Align and bin eye-tracking records");
    add_common(bin, o);
    bin->add_option("--corpus", o.corpus, "Corpus cache from preprocess (data.corpus)");
    bin->add_option("--gaze-csv", o.gaze_csv, "Raw gaze records (data.gaze_csv)");
    bin->add_option("--readers", o.readers, "Reader metadata (data.readers)");

    auto* train = app.add_subcommand("train", "Run the configured folds and keep the trained models");
    add_common(train, o);
    add_experiment_inputs(train, o);

    auto* run = app.add_subcommand("run", "Run the configured experiment");
    add_common(run, o);
    add_experiment_inputs(run, o);

    auto* abl = app.add_subcommand("ablate", "Rerun with each gaze attribute's weight set to zero");
    add_common(abl, o);
    add_experiment_inputs(abl, o);
    abl->add_option("--attributes", o.attributes, "Attributes to ablate (DT FFD IR RC Skip); default all")
        ->delimiter(',');

    auto* grid = app.add_subcommand("gridsearch", "Search per-attribute gaze loss weights");
    add_common(grid, o);
    add_experiment_inputs(grid, o);

    auto* report = app.add_subcommand("report", "Tabulate and compare saved reports");
    add_common(report, o);
    report->add_option("reports", o.reports, "Report directories written by run or train");
    report->add_flag("--compare", o.compare, "Paired significance test of each report against the first");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Context c;
    c.opts = o;
    c.out = &out;
    c.err = &err;
    c.sub = app.get_subcommands().front();
    c.command = c.sub->get_name();
    if (const char* dir = std::getenv(kDataDirVariable); dir && *dir) c.data_dir = dir;

    try {
        c.values = resolve_values(c);
        c.config = build_config(c);
        if (c.command == "preprocess") return cmd_preprocess(c);
        if (c.command == "bin-gaze") return cmd_bin_gaze(c);
        if (c.command == "train") return cmd_run(c, true);
        if (c.command == "run") return cmd_run(c, false);
        if (c.command == "ablate") return cmd_ablate(c);
        if (c.command == "gridsearch") return cmd_gridsearch(c);
        return cmd_report(c);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return c.started ? kExitFailure : kExitUsage;
    }
}

}  // namespace gazeaes::cli
