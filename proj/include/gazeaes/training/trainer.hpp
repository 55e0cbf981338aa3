#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gazeaes/corpus/vocabulary.hpp"
#include "gazeaes/model/scorer.hpp"
#include "gazeaes/numerics/checkpoint.hpp"
#include "gazeaes/training/config.hpp"
#include "gazeaes/training/loss.hpp"

namespace gazeaes::training {

/// An essay with its token ids under one vocabulary.
struct Example {
    const corpus::Essay* essay = nullptr;
    corpus::EncodedText text;
};

/// Encoded essays that keep the partition tag they were drawn from.
struct Dataset {
    corpus::Role role = corpus::Role::train;
    std::vector<Example> examples;

    static Dataset encode(const corpus::TaggedEssays& essays, const corpus::Vocabulary& vocab);
    std::size_t size() const { return examples.size(); }
};

/// Set-level context shared by training and evaluation.
struct TrainingContext {
    corpus::SetTable sets = corpus::asap_essay_sets();
    std::map<int, corpus::EncodedText> articles;  // encoded source article per set id
    std::ostream* log = nullptr;                  // key=value epoch lines
};

struct Evaluation {
    std::vector<double> predictions;  // normalized, one per example
    std::vector<int> predicted_scores;
    std::vector<int> actual_scores;
    std::map<int, double> qwk_per_set;
    double qwk = 0.0;  // mean of qwk_per_set
    LossBreakdown loss;
};

struct EpochRecord {
    std::size_t epoch = 0;
    LossBreakdown train;  // running loss over the epoch's batches (dropout on)
    double dev_qwk = std::numeric_limits<double>::quiet_NaN();
    double max_grad_norm = 0.0;
    std::size_t clipped_batches = 0;
};

struct TrainResult {
    numerics::Checkpoint checkpoint;  // the selected parameters, also left in the model
    std::size_t best_epoch = 0;       // 0 = initial parameters
    double best_dev_qwk = std::numeric_limits<double>::quiet_NaN();
    std::vector<EpochRecord> history;
    std::vector<std::string> warnings;
};

class TrainingDivergedError : public std::runtime_error {
public:
    TrainingDivergedError(std::size_t epoch, std::size_t batch, std::map<std::string, double> norms,
                          const std::string& what);
    std::size_t epoch() const { return epoch_; }
    std::size_t batch() const { return batch_; }
    const std::map<std::string, double>& parameter_norms() const { return norms_; }

private:
    std::size_t epoch_;
    std::size_t batch_;
    std::map<std::string, double> norms_;
};

/// Eval-mode forward pass over every example. QWK is computed per essay set
/// on denormalized predictions and averaged over sets.
template <typename T>
Evaluation evaluate(model::EssayScorer<T>& model, const Dataset& data, const TrainingContext& context);

/// Mini-batch RMSProp on the multi-task loss. `dev` may be null, in which
/// case the final epoch is kept. With a dev set, the epoch with the highest
/// dev QWK wins (earliest on ties) and its parameters are restored into the
/// model. Throws LeakageError if `train_data` is not a training partition or
/// `dev` is a test partition, TrainingDivergedError on a non-finite loss.
template <typename T>
TrainResult train(model::EssayScorer<T>& model, const Dataset& train_data, const Dataset* dev,
                  const TrainConfig& config, const TrainingContext& context);

/// `epoch=3 score_mse=... gaze_mse.DT=... weighted_total=... dev_qwk=...`
std::string format_epoch_line(const EpochRecord& record);

}  // namespace gazeaes::training
