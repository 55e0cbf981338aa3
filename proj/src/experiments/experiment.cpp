#include "gazeaes/experiments/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "gazeaes/corpus/embeddings.hpp"
#include "gazeaes/corpus/loader.hpp"
#include "gazeaes/gaze/binning.hpp"
#include "gazeaes/metrics/agreement.hpp"
#include "gazeaes/util/jobs.hpp"
#include "gazeaes/util/strings.hpp"

namespace gazeaes::experiments {

namespace {

constexpr std::array<std::pair<System, const char*>, 6> kSystemNames{{
    {System::self_attention, "self_attention"},
    {System::co_attention, "co_attention"},
    {System::co_attention_gaze, "co_attention_gaze"},
    {System::only_prompt, "only_prompt"},
    {System::extra_essays, "extra_essays"},
    {System::essays_gaze, "essays_gaze"},
}};

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
    std::vector<int> out;
    for (const auto& part : util::split(text, ',')) {
        const auto t = util::trim(part);
        if (t.empty()) continue;
        auto v = util::parse_int(t);
        if (!v) throw ExperimentConfigError(key + ": '" + std::string(t) + "' is not an integer");
        out.push_back(static_cast<int>(*v));
    }
    return out;
}

/// Read-only inputs shared by every job of one run.
struct RunInputs {
    std::map<long long, const corpus::Essay*> by_id;
    std::vector<gaze::GazeRecord> records;   // after the reader filter
    std::vector<long long> augmentation;    // essays with gaze records, sorted
    FoldTable folds;
    bool keep_models = false;
};

RunInputs prepare_inputs(const ExperimentConfig& config, const ExperimentData& data) {
    RunInputs in;
    for (const auto& e : data.essays) in.by_id.emplace(e.essay_id, &e);
    in.records = gaze::filter_readers(data.gaze_records, config.reader_filter, data.readers);
    std::set<long long> gaze_ids;
    for (const auto& r : data.gaze_records) {
        if (in.by_id.count(r.essay_id)) gaze_ids.insert(r.essay_id);
    }
    in.augmentation.assign(gaze_ids.begin(), gaze_ids.end());
    in.folds = data.folds;
    for (int set_id : config.resolved_sets()) {
        if (in.folds.count(set_id)) continue;
        std::vector<long long> ids;
        for (const auto& e : data.essays) {
            if (e.set_id == set_id) ids.push_back(e.essay_id);
        }
        in.folds[set_id] = make_folds(ids, set_id, derive_seed(config.seed, "folds:" + std::to_string(set_id)));
    }
    return in;
}

struct FoldJob {
    int set_id = 0;
    const FoldSpec* fold = nullptr;
    std::uint64_t seed = 0;
    model::ModelConfig model;
};

struct FoldOutput {
    FoldResult result;
    std::vector<EssayPrediction> predictions;
};

std::vector<corpus::Essay> copy_essays(const RunInputs& in, const std::vector<long long>& ids) {
    std::vector<corpus::Essay> out;
    out.reserve(ids.size());
    for (long long id : ids) {
        auto it = in.by_id.find(id);
        if (it == in.by_id.end()) throw FoldError("fold lists unknown essay " + std::to_string(id));
        out.push_back(*it->second);
        out.back().gaze.clear();
    }
    return out;
}

void attach_partition_gaze(std::vector<corpus::Essay>& essays, const std::vector<gaze::GazeRecord>& records,
                           const gaze::ReaderStatsTable& stats, std::vector<std::string>& warnings) {
    std::set<long long> ids;
    for (const auto& e : essays) ids.insert(e.essay_id);
    std::vector<gaze::GazeRecord> mine;
    for (const auto& r : records) {
        if (ids.count(r.essay_id)) mine.push_back(r);
    }
    if (mine.empty()) return;
    auto binned = gaze::bin_all(mine, stats, essays);
    for (const auto& d : binned.diagnostics) warnings.push_back(d);
    gaze::attach_gaze(essays, binned);
}

template <typename T>
FoldOutput run_fold(const ExperimentConfig& config, const ExperimentData& data, const RunInputs& in,
                    const FoldJob& job) {
    FoldOutput out;
    FoldResult& r = out.result;
    r.set_id = job.set_id;
    r.fold_id = job.fold->fold_id;
    r.seed = job.seed;

    auto train_essays = copy_essays(in, job.fold->train);
    auto dev_essays = copy_essays(in, job.fold->dev);
    auto test_essays = copy_essays(in, job.fold->test);
    const std::set<long long> test_ids(job.fold->test.begin(), job.fold->test.end());

    auto assert_outside_test = [&](const std::vector<corpus::Essay>& essays, const char* what) {
        ++r.leakage_checks;
        for (const auto& e : essays) {
            if (test_ids.count(e.essay_id)) {
                throw corpus::LeakageError(std::string(what) + " contains test essay " + std::to_string(e.essay_id));
            }
        }
    };

    if (augments_training(config.system)) {
        auto extra = copy_essays(in, in.augmentation);
        assert_outside_test(extra, "augmentation set");
        r.augmented = extra.size();
        for (auto& e : extra) train_essays.push_back(std::move(e));
    }
    assert_outside_test(train_essays, "training partition");
    assert_outside_test(dev_essays, "dev partition");

    const auto train_tag = corpus::TaggedEssays::of(corpus::Role::train, train_essays);
    const auto vocab = corpus::build_vocab(train_tag, job.model.vocab_size);
    ++r.leakage_checks;

    if (uses_gaze(config.system)) {
        const auto stats = gaze::training_reader_stats(in.records, train_tag, &r.warnings);
        ++r.leakage_checks;
        attach_partition_gaze(train_essays, in.records, stats, r.warnings);
        attach_partition_gaze(dev_essays, in.records, stats, r.warnings);
        for (const auto& e : train_essays) r.gaze_essays += e.gaze.empty() ? 0 : 1;
    }

    const auto train_set = training::Dataset::encode(train_tag, vocab);
    const auto dev_set = training::Dataset::encode(corpus::TaggedEssays::of(corpus::Role::dev, dev_essays), vocab);
    const auto test_set = training::Dataset::encode(corpus::TaggedEssays::of(corpus::Role::test, test_essays), vocab);
    r.train_size = train_set.size();
    r.dev_size = dev_set.size();
    r.test_size = test_set.size();

    model::EssayScorer<T> scorer(job.model, vocab.size(), derive_seed(job.seed, "model"));
    if (config.embeddings) {
        scorer.load_embeddings(corpus::load_embeddings(*config.embeddings, vocab, job.model.embedding_dim,
                                                       derive_seed(job.seed, "embeddings")));
    }

    std::ostringstream log;
    training::TrainingContext context;
    context.sets = data.sets;
    context.log = &log;
    if (job.model.architecture == model::Architecture::co_attention) {
        const auto& set = corpus::lookup_set(data.sets, job.set_id);
        context.articles[job.set_id] = vocab.encode(corpus::article_sentences(set, data.limits));
    }

    auto train_config = config.train;
    train_config.seed = job.seed;
    auto trained = training::train(scorer, train_set, &dev_set, train_config, context);
    r.history = std::move(trained.history);
    r.best_epoch = trained.best_epoch;
    r.best_dev_qwk = trained.best_dev_qwk;
    for (auto& w : trained.warnings) r.warnings.push_back(std::move(w));

    if (job.model.has_gaze()) {
        const auto dev_eval = training::evaluate(scorer, dev_set, context);
        r.dev_gaze_mse = dev_eval.loss.gaze_mse;
        r.dev_gaze_tokens = dev_eval.loss.gaze_token_count;
    }
    const auto test_eval = training::evaluate(scorer, test_set, context);
    r.test_qwk = test_eval.qwk_per_set.at(job.set_id);
    for (std::size_t i = 0; i < test_set.size(); ++i) {
        out.predictions.push_back({job.set_id, r.fold_id, test_set.examples[i].essay->essay_id,
                                   test_eval.predictions[i], test_eval.predicted_scores[i],
                                   test_eval.actual_scores[i]});
    }
    r.log = log.str();
    if (in.keep_models) {
        r.checkpoint = std::move(trained.checkpoint);
        r.vocab = vocab;
    }
    return out;
}

FoldOutput dispatch_fold(const ExperimentConfig& config, const ExperimentData& data, const RunInputs& in,
                         const FoldJob& job) {
    return config.precision == 64 ? run_fold<double>(config, data, in, job) : run_fold<float>(config, data, in, job);
}

std::vector<FoldJob> make_jobs(const ExperimentConfig& config, const RunInputs& in) {
    std::vector<FoldJob> jobs;
    const auto model = config.resolved_model();
    for (int set_id : config.resolved_sets()) {
        const auto& folds = in.folds.at(set_id);
        for (int k : config.resolved_folds()) {
            FoldJob job;
            job.set_id = set_id;
            job.fold = &folds.at(static_cast<std::size_t>(k));
            job.seed = config.seed + jobs.size();
            job.model = model;
            jobs.push_back(job);
        }
    }
    return jobs;
}

}  // namespace

std::string to_string(System s) {
    for (const auto& [sys, name] : kSystemNames) {
        if (sys == s) return name;
    }
    throw std::logic_error("unknown system");
}

System parse_system(const std::string& text) {
    const auto lower = util::to_lower(util::trim(text));
    for (const auto& [sys, name] : kSystemNames) {
        if (lower == name) return sys;
    }
    throw ExperimentConfigError("unknown system '" + text +
                                "' (expected self_attention, co_attention, co_attention_gaze, only_prompt, "
                                "extra_essays or essays_gaze)");
}

bool uses_gaze(System s) { return s == System::co_attention_gaze || s == System::essays_gaze; }
bool uses_articles(System s) { return s == System::co_attention || s == System::co_attention_gaze; }
bool augments_training(System s) { return s == System::extra_essays || s == System::essays_gaze; }

model::Architecture architecture_for(System s) {
    return uses_articles(s) ? model::Architecture::co_attention : model::Architecture::self_attention;
}

std::vector<int> default_target_sets(System s) {
    switch (s) {
        case System::self_attention:
        case System::co_attention:
        case System::co_attention_gaze: return {3, 4, 5, 6};
        default: return {1, 2, 7, 8};
    }
}

std::vector<int> ExperimentConfig::resolved_sets() const {
    return target_sets.empty() ? default_target_sets(system) : target_sets;
}

std::vector<int> ExperimentConfig::resolved_folds() const {
    if (!folds.empty()) return folds;
    std::vector<int> all(kFoldCount);
    for (int k = 0; k < kFoldCount; ++k) all[static_cast<std::size_t>(k)] = k;
    return all;
}

model::ModelConfig ExperimentConfig::resolved_model() const {
    auto m = model;
    m.architecture = architecture_for(system);
    if (uses_gaze(system)) {
        if (m.gaze_attributes.empty()) {
            m.gaze_attributes.assign(gaze::kAllGazeAttributes.begin(), gaze::kAllGazeAttributes.end());
        }
        const auto defaults = model::default_gaze_weights();
        for (auto a : m.gaze_attributes) m.gaze_loss_weights.emplace(a, defaults.at(a));
        if (ablate_attribute) m.gaze_loss_weights[*ablate_attribute] = 0.0;
    } else {
        m.gaze_attributes.clear();
        m.gaze_loss_weights.clear();
    }
    return m;
}

void ExperimentConfig::validate() const {
    if (precision != 32 && precision != 64) throw ExperimentConfigError("experiment.precision must be 32 or 64");
    for (int k : resolved_folds()) {
        if (k < 0 || k >= kFoldCount) throw ExperimentConfigError("experiment.folds entries must be 0-4");
    }
    if (ablate_attribute) {
        if (!uses_gaze(system)) {
            throw ExperimentConfigError("ablation needs a gaze system, not " + to_string(system));
        }
        const auto m = resolved_model();
        if (std::find(m.gaze_attributes.begin(), m.gaze_attributes.end(), *ablate_attribute) ==
            m.gaze_attributes.end()) {
            throw ExperimentConfigError("cannot ablate " + std::string(gaze::short_name(*ablate_attribute)) +
                                        ": attribute is not configured");
        }
    }
    try {
        resolved_model().validate();
        train.validate();
    } catch (const std::invalid_argument& e) {
        throw ExperimentConfigError(e.what());
    }
}

std::map<std::string, std::string> ExperimentConfig::to_map() const {
    auto m = resolved_model().to_map();
    for (const auto& [k, v] : train.to_map()) m[k] = v;
    m.erase("train.seed");
    m["experiment.system"] = to_string(system);
    m["experiment.sets"] = util::join(resolved_sets(), ",");
    m["experiment.folds"] = util::join(resolved_folds(), ",");
    m["experiment.readers"] = reader_filter.to_string();
    m["experiment.ablate"] = ablate_attribute ? std::string(gaze::short_name(*ablate_attribute)) : "none";
    m["experiment.seed"] = std::to_string(seed);
    m["experiment.precision"] = std::to_string(precision);
    m["experiment.jobs"] = std::to_string(jobs);
    m["experiment.embeddings"] = embeddings ? embeddings->string() : "";
    return m;
}

ExperimentConfig ExperimentConfig::from_map(const std::map<std::string, std::string>& values) {
    ExperimentConfig c;
    if (values.count("train.seed")) {
        throw ExperimentConfigError("train.seed is derived per job; set experiment.seed instead");
    }
    try {
        c.model = model::ModelConfig::from_map(values);
        c.train = training::TrainConfig::from_map(values);
    } catch (const std::invalid_argument& e) {
        throw ExperimentConfigError(e.what());
    }
    auto count = [](const std::string& key, const std::string& v) {
        auto n = util::parse_int(v);
        if (!n || *n < 0) throw ExperimentConfigError(key + " expects a non-negative integer, got '" + v + "'");
        return static_cast<std::uint64_t>(*n);
    };
    for (const auto& [key, v] : values) {
        if (!util::starts_with(key, "experiment.")) continue;
        if (key == "experiment.system") c.system = parse_system(v);
        else if (key == "experiment.sets") c.target_sets = parse_int_list(key, v);
        else if (key == "experiment.folds") c.folds = parse_int_list(key, v);
        else if (key == "experiment.readers") c.reader_filter = gaze::ReaderFilter::parse(v);
        else if (key == "experiment.ablate") {
            const auto t = util::to_lower(util::trim(v));
            if (t.empty() || t == "none") c.ablate_attribute.reset();
            else c.ablate_attribute = gaze::parse_gaze_attribute(t);
        } else if (key == "experiment.seed") c.seed = count(key, v);
        else if (key == "experiment.precision") c.precision = static_cast<int>(count(key, v));
        else if (key == "experiment.jobs") c.jobs = count(key, v);
        else if (key == "experiment.embeddings") {
            if (util::trim(v).empty()) c.embeddings.reset();
            else c.embeddings = std::filesystem::path(std::string(util::trim(v)));
        } else {
            throw ExperimentConfigError("unknown experiment option '" + key + "'");
        }
    }
    // The model section may carry an explicit architecture; the system decides.
    c.validate();
    return c;
}

void ExperimentReport::recompute_means() {
    std::map<int, std::pair<double, std::size_t>> sums;
    for (const auto& f : folds) {
        sums[f.set_id].first += f.test_qwk;
        sums[f.set_id].second += 1;
    }
    mean_qwk.clear();
    double total = 0.0;
    for (const auto& [set_id, s] : sums) {
        mean_qwk[set_id] = s.first / static_cast<double>(s.second);
        total += mean_qwk[set_id];
    }
    grand_mean_qwk = mean_qwk.empty() ? 0.0 : total / static_cast<double>(mean_qwk.size());
}

void preflight(const ExperimentConfig& config, const ExperimentData& data) {
    config.validate();
    const auto sets = config.resolved_sets();
    if (sets.empty()) throw ExperimentConfigError("no target sets");
    std::map<int, std::vector<long long>> ids;
    for (const auto& e : data.essays) ids[e.set_id].push_back(e.essay_id);
    for (int set_id : sets) {
        if (!data.sets.count(set_id)) throw ExperimentConfigError("unknown essay set " + std::to_string(set_id));
        if (ids[set_id].empty()) throw ExperimentConfigError("essay set " + std::to_string(set_id) + " has no essays");
        if (uses_articles(config.system)) {
            const auto& set = data.sets.at(set_id);
            if (!set.source_article || util::trim(*set.source_article).empty()) {
                throw ExperimentConfigError(to_string(config.system) + " needs a source article for essay set " +
                                            std::to_string(set_id));
            }
        }
        if (auto it = data.folds.find(set_id); it != data.folds.end()) {
            try {
                validate_folds(it->second, ids[set_id]);
            } catch (const FoldError& e) {
                throw ExperimentConfigError("folds for set " + std::to_string(set_id) + ": " + e.what());
            }
        } else if (ids[set_id].size() < static_cast<std::size_t>(kFoldCount)) {
            throw ExperimentConfigError("essay set " + std::to_string(set_id) + " has fewer than 5 essays");
        }
    }
    if (uses_gaze(config.system)) {
        const auto kept = gaze::filter_readers(data.gaze_records, config.reader_filter, data.readers);
        if (kept.empty()) {
            throw ExperimentConfigError(to_string(config.system) + " needs gaze data, but none is left after reader filter '" +
                                        config.reader_filter.to_string() + "'");
        }
    }
    if (augments_training(config.system)) {
        std::set<long long> gaze_ids;
        for (const auto& r : data.gaze_records) gaze_ids.insert(r.essay_id);
        bool any = false;
        for (const auto& e : data.essays) {
            if (!gaze_ids.count(e.essay_id)) continue;
            any = true;
            if (std::find(sets.begin(), sets.end(), e.set_id) != sets.end()) {
                throw ExperimentConfigError("gaze essay " + std::to_string(e.essay_id) + " belongs to target set " +
                                            std::to_string(e.set_id) + "; augmentation must come from other sets");
            }
        }
        if (!any) throw ExperimentConfigError(to_string(config.system) + " needs the gaze essays as extra training data");
    }
}

ExperimentReport run_experiment(const ExperimentConfig& config, const ExperimentData& data,
                                const RunOptions& options) {
    preflight(config, data);
    auto inputs = prepare_inputs(config, data);
    inputs.keep_models = options.keep_models;
    const auto jobs = make_jobs(config, inputs);

    std::vector<FoldOutput> outputs(jobs.size());
    auto failures = util::run_jobs(jobs.size(), config.jobs,
                                   [&](std::size_t i) { outputs[i] = dispatch_fold(config, data, inputs, jobs[i]); });

    ExperimentReport report;
    report.config = config;
    for (const auto& f : failures) {
        report.failures.push_back("set " + std::to_string(jobs[f.index].set_id) + " fold " +
                                  std::to_string(jobs[f.index].fold->fold_id) + ": " + f.message);
    }
    if (!report.failures.empty() && !options.allow_partial) {
        throw std::runtime_error(std::to_string(report.failures.size()) + " of " + std::to_string(jobs.size()) +
                                 " jobs failed: " + util::join(report.failures, "; "));
    }
    std::set<std::size_t> failed;
    for (const auto& f : failures) failed.insert(f.index);
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (failed.count(i)) continue;
        auto& out = outputs[i];
        report.folds.push_back(std::move(out.result));
        for (auto& p : out.predictions) report.predictions.push_back(p);
    }
    report.recompute_means();
    return report;
}

AblationReport ablate(const ExperimentConfig& config, const ExperimentData& data, gaze::GazeAttribute attribute) {
    auto ablated_config = config;
    ablated_config.ablate_attribute = attribute;
    ablated_config.validate();  // non-gaze system or unconfigured attribute

    auto full_config = config;
    full_config.ablate_attribute.reset();
    AblationReport out;
    out.attribute = attribute;
    out.full = run_experiment(full_config, data);
    out.ablated = run_experiment(ablated_config, data);
    for (const auto& [set_id, q] : out.full.mean_qwk) out.delta_qwk[set_id] = q - out.ablated.mean_qwk.at(set_id);
    out.delta_grand_mean = out.full.grand_mean_qwk - out.ablated.grand_mean_qwk;
    return out;
}

Comparison compare(const ExperimentReport& baseline, const ExperimentReport& candidate,
                   const corpus::SetTable& sets) {
    if (baseline.config.resolved_sets() != candidate.config.resolved_sets()) {
        throw FoldError("reports cover different target sets");
    }
    if (baseline.predictions.size() != candidate.predictions.size()) {
        throw FoldError("reports have different numbers of test predictions (" +
                        std::to_string(baseline.predictions.size()) + " vs " +
                        std::to_string(candidate.predictions.size()) + ")");
    }
    using Key = std::tuple<int, int, long long>;
    std::map<Key, const EssayPrediction*> lookup;
    for (const auto& p : candidate.predictions) lookup[{p.set_id, p.fold_id, p.essay_id}] = &p;

    std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_set;
    std::vector<double> all_a, all_b;
    for (const auto& a : baseline.predictions) {
        auto it = lookup.find({a.set_id, a.fold_id, a.essay_id});
        if (it == lookup.end()) {
            throw FoldError("essay " + std::to_string(a.essay_id) + " (set " + std::to_string(a.set_id) + ", fold " +
                            std::to_string(a.fold_id) + ") is missing from the candidate report");
        }
        const auto& b = *it->second;
        if (a.actual != b.actual) throw FoldError("gold scores differ for essay " + std::to_string(a.essay_id));
        const double gold = corpus::normalize_score(a.actual, corpus::lookup_set(sets, a.set_id));
        const double ea = (a.normalized - gold) * (a.normalized - gold);
        const double eb = (b.normalized - gold) * (b.normalized - gold);
        by_set[a.set_id].first.push_back(ea);
        by_set[a.set_id].second.push_back(eb);
        all_a.push_back(ea);
        all_b.push_back(eb);
    }

    Comparison c;
    c.baseline = to_string(baseline.config.system);
    c.candidate = to_string(candidate.config.system);
    c.pairing = "per-essay squared error of the normalized prediction against the normalized gold score, "
                "matched by (set, fold, essay_id); difference = baseline - candidate";
    for (const auto& [set_id, errs] : by_set) c.per_set[set_id] = metrics::paired_t_test(errs.first, errs.second);
    c.overall = metrics::paired_t_test(all_a, all_b);
    return c;
}

training::GridSearchResult grid_search(const ExperimentConfig& config, const ExperimentData& data) {
    if (!uses_gaze(config.system)) {
        throw ExperimentConfigError("grid search needs a gaze system, not " + to_string(config.system));
    }
    preflight(config, data);
    const auto inputs = prepare_inputs(config, data);
    const auto folds = config.resolved_folds();
    const auto sets = config.resolved_sets();
    const auto base_model = config.resolved_model();

    auto run_cell = [&](const training::GridCell& cell) {
        double weighted = 0.0;
        std::size_t tokens = 0;
        for (int set_id : sets) {
            FoldJob job;
            job.set_id = set_id;
            job.fold = &inputs.folds.at(set_id).at(static_cast<std::size_t>(folds.at(cell.fold)));
            job.seed = cell.seed;
            job.model = base_model;
            job.model.gaze_attributes = {cell.attribute};
            job.model.gaze_loss_weights = {{cell.attribute, cell.weight}};
            const auto out = dispatch_fold(config, data, inputs, job);
            weighted += out.result.dev_gaze_mse.at(cell.attribute) * static_cast<double>(out.result.dev_gaze_tokens);
            tokens += out.result.dev_gaze_tokens;
        }
        if (tokens == 0) {
            throw std::runtime_error("fold " + std::to_string(folds.at(cell.fold)) +
                                     " has no gaze-labeled dev essays in any target set");
        }
        return weighted / static_cast<double>(tokens);
    };
    return training::grid_search_gaze_weights(run_cell, base_model.gaze_attributes, config.train.gaze_weight_grid,
                                              folds.size(), config.seed, config.jobs);
}

}  // namespace gazeaes::experiments
