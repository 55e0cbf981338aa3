#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gazeaes/corpus/text.hpp"
#include "gazeaes/experiments/folds.hpp"
#include "gazeaes/gaze/records.hpp"
#include "gazeaes/metrics/significance.hpp"
#include "gazeaes/model/config.hpp"
#include "gazeaes/numerics/checkpoint.hpp"
#include "gazeaes/training/config.hpp"
#include "gazeaes/training/grid_search.hpp"
#include "gazeaes/training/trainer.hpp"

namespace gazeaes::experiments {

/// The six configurations. The first three score prompts that have gaze
/// data; the last three score prompts without it, optionally borrowing the
/// gaze essays as extra training data.
enum class System { self_attention, co_attention, co_attention_gaze, only_prompt, extra_essays, essays_gaze };

std::string to_string(System s);
System parse_system(const std::string& text);
bool uses_gaze(System s);
bool uses_articles(System s);
bool augments_training(System s);
model::Architecture architecture_for(System s);
/// {3,4,5,6} for the first three systems, {1,2,7,8} for the others.
std::vector<int> default_target_sets(System s);

class ExperimentConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    System system = System::co_attention_gaze;
    std::vector<int> target_sets;  // empty = default_target_sets(system)
    std::vector<int> folds;        // empty = all five
    gaze::ReaderFilter reader_filter;
    std::optional<gaze::GazeAttribute> ablate_attribute;
    std::uint64_t seed = 0;
    int precision = 32;  // 32 or 64
    std::size_t jobs = 1;
    std::optional<std::filesystem::path> embeddings;
    model::ModelConfig model;  // architecture and gaze heads follow `system`
    training::TrainConfig train;

    std::vector<int> resolved_sets() const;
    std::vector<int> resolved_folds() const;
    /// The model configuration actually trained: architecture from the
    /// system, all five gaze heads for gaze systems unless listed, ablated
    /// attribute weight set to 0.
    model::ModelConfig resolved_model() const;
    void validate() const;

    /// experiment.*, model.* and train.* keys.
    std::map<std::string, std::string> to_map() const;
    static ExperimentConfig from_map(const std::map<std::string, std::string>& values);
};

/// Everything a run reads. Folds missing for a target set are generated
/// from the config seed.
struct ExperimentData {
    corpus::SetTable sets = corpus::asap_essay_sets();
    std::vector<corpus::Essay> essays;
    std::vector<gaze::GazeRecord> gaze_records;
    gaze::ReaderTable readers;
    FoldTable folds;
    corpus::TextLimits limits;
};

struct EssayPrediction {
    int set_id = 0;
    int fold_id = 0;
    long long essay_id = 0;
    double normalized = 0.0;
    int predicted = 0;
    int actual = 0;
};

struct FoldResult {
    int set_id = 0;
    int fold_id = 0;
    std::uint64_t seed = 0;
    double test_qwk = 0.0;
    double best_dev_qwk = 0.0;
    std::size_t best_epoch = 0;
    std::size_t train_size = 0;  // including augmentation
    std::size_t dev_size = 0;
    std::size_t test_size = 0;
    std::size_t augmented = 0;
    std::size_t gaze_essays = 0;  // training essays carrying gaze labels
    std::size_t leakage_checks = 0;
    std::map<gaze::GazeAttribute, double> dev_gaze_mse;
    std::size_t dev_gaze_tokens = 0;
    std::vector<training::EpochRecord> history;
    std::vector<std::string> warnings;
    std::string log;
    // Filled only when RunOptions::keep_models is set.
    std::optional<numerics::Checkpoint> checkpoint;
    std::optional<corpus::Vocabulary> vocab;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<FoldResult> folds;            // ordered by (set, fold)
    std::vector<EssayPrediction> predictions;  // ordered by (set, fold, essay order in fold)
    std::map<int, double> mean_qwk;            // per set, over folds
    double grand_mean_qwk = 0.0;               // over sets
    std::vector<std::string> failures;

    /// Recomputes mean_qwk and grand_mean_qwk from folds.
    void recompute_means();
};

struct RunOptions {
    bool keep_models = false;
    /// Return the successful folds with report.failures filled instead of
    /// throwing when some jobs fail.
    bool allow_partial = false;
};

/// Trains and tests every (target set, fold) pair. Config contradictions
/// (missing articles, no gaze, bad folds) throw ExperimentConfigError before
/// any training. Job i of the (set, fold) list uses seed config.seed + i.
/// Failed jobs are listed in report.failures and the run throws
/// std::runtime_error naming them once all jobs have finished.
ExperimentReport run_experiment(const ExperimentConfig& config, const ExperimentData& data,
                                const RunOptions& options = {});

/// Checks everything run_experiment checks before training; throws
/// ExperimentConfigError with the first problem found.
void preflight(const ExperimentConfig& config, const ExperimentData& data);

struct AblationReport {
    gaze::GazeAttribute attribute = gaze::GazeAttribute::dwell_time;
    ExperimentReport full;
    ExperimentReport ablated;
    std::map<int, double> delta_qwk;  // full - ablated, per set
    double delta_grand_mean = 0.0;
};

/// Runs the config as is and with `attribute`'s loss weight set to 0.
/// Throws ExperimentConfigError for a non-gaze system or an attribute that
/// is not configured.
AblationReport ablate(const ExperimentConfig& config, const ExperimentData& data, gaze::GazeAttribute attribute);

struct Comparison {
    std::string baseline;
    std::string candidate;
    std::string pairing;
    std::map<int, metrics::SignificanceResult> per_set;
    metrics::SignificanceResult overall;
};

/// Paired t-test of the baseline's per-essay squared errors against the
/// candidate's (normalized prediction vs normalized gold score), matched by
/// (set, fold, essay). Throws FoldError when the reports were not run on
/// identical folds and target sets; a zero-variance difference propagates
/// std::invalid_argument from the test.
Comparison compare(const ExperimentReport& baseline, const ExperimentReport& candidate,
                   const corpus::SetTable& sets = corpus::asap_essay_sets());

/// Per-attribute grid search on the config's gaze system: each cell trains
/// every target set on one fold with only that attribute weighted and scores
/// the dev-set gaze MSE, pooled over sets by labeled-token count.
training::GridSearchResult grid_search(const ExperimentConfig& config, const ExperimentData& data);

}  // namespace gazeaes::experiments
