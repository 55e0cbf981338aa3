#include "gazeaes/training/trainer.hpp"

#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "gazeaes/metrics/agreement.hpp"
#include "gazeaes/numerics/rmsprop.hpp"
#include "gazeaes/util/strings.hpp"

namespace gazeaes::training {

namespace {

constexpr std::size_t kEvalChunk = 32;

std::string describe_norms(const std::map<std::string, double>& norms) {
    std::ostringstream out;
    for (const auto& [name, v] : norms) out << ' ' << name << '=' << util::format_double(v);
    return out.str();
}

template <typename T>
std::map<int, model::EssayEncoding<T>> encode_articles(numerics::Graph<T>& g, model::EssayScorer<T>& model,
                                                       const TrainingContext& context,
                                                       const std::vector<const Example*>& batch) {
    std::map<int, model::EssayEncoding<T>> out;
    if (model.config().architecture != model::Architecture::co_attention) return out;
    for (const auto* ex : batch) {
        const int set_id = ex->essay->set_id;
        if (out.count(set_id)) continue;
        auto it = context.articles.find(set_id);
        if (it == context.articles.end()) {
            throw std::invalid_argument("no source article for essay set " + std::to_string(set_id));
        }
        out.emplace(set_id, model.encode_article(g, it->second));
    }
    return out;
}

template <typename T>
BatchLoss<T> batch_loss(numerics::Graph<T>& g, model::EssayScorer<T>& model, const TrainingContext& context,
                        const std::vector<const Example*>& batch, std::vector<double>* predictions) {
    const auto articles = encode_articles(g, model, context, batch);
    std::vector<model::ForwardOutput<T>> outputs;
    std::vector<const corpus::Essay*> essays;
    outputs.reserve(batch.size());
    for (const auto* ex : batch) {
        auto art = articles.find(ex->essay->set_id);
        outputs.push_back(model.forward(g, ex->text, art == articles.end() ? nullptr : &art->second));
        essays.push_back(ex->essay);
        if (predictions) predictions->push_back(static_cast<double>(outputs.back().score.item()));
    }
    return multitask_loss<T>(g, outputs, essays, model.config().gaze_loss_weights);
}

void check_articles(const model::ModelConfig& config, const TrainingContext& context, const Dataset& data) {
    if (config.architecture != model::Architecture::co_attention) return;
    for (const auto& ex : data.examples) {
        if (!context.articles.count(ex.essay->set_id)) {
            throw std::invalid_argument("co-attention model has no source article for essay set " +
                                        std::to_string(ex.essay->set_id));
        }
    }
}

}  // namespace

Dataset Dataset::encode(const corpus::TaggedEssays& essays, const corpus::Vocabulary& vocab) {
    Dataset d;
    d.role = essays.role;
    d.examples.reserve(essays.essays.size());
    for (const auto* e : essays.essays) {
        Example ex{e, vocab.encode(e->sentences)};
        if (ex.text.empty()) ex.text.emplace_back();
        d.examples.push_back(std::move(ex));
    }
    return d;
}

TrainingDivergedError::TrainingDivergedError(std::size_t epoch, std::size_t batch,
                                             std::map<std::string, double> norms, const std::string& what)
    : std::runtime_error(what + " at epoch " + std::to_string(epoch) + " batch " + std::to_string(batch) +
                         "; parameter norms:" + describe_norms(norms)),
      epoch_(epoch),
      batch_(batch),
      norms_(std::move(norms)) {}

template <typename T>
Evaluation evaluate(model::EssayScorer<T>& model, const Dataset& data, const TrainingContext& context) {
    Evaluation ev;
    if (data.examples.empty()) {
        ev.qwk = std::numeric_limits<double>::quiet_NaN();
        return ev;
    }
    check_articles(model.config(), context, data);
    const auto& weights = model.config().gaze_loss_weights;
    for (std::size_t begin = 0; begin < data.examples.size(); begin += kEvalChunk) {
        const std::size_t end = std::min(begin + kEvalChunk, data.examples.size());
        std::vector<const Example*> chunk;
        for (std::size_t i = begin; i < end; ++i) chunk.push_back(&data.examples[i]);
        numerics::Graph<T> g(numerics::Mode::eval);
        auto loss = batch_loss(g, model, context, chunk, &ev.predictions);
        ev.loss = begin == 0 ? loss.breakdown : LossBreakdown::merge(ev.loss, loss.breakdown, weights);
    }

    std::map<int, std::vector<metrics::RatingPair>> by_set;
    for (std::size_t i = 0; i < data.examples.size(); ++i) {
        const auto* essay = data.examples[i].essay;
        const auto& set = corpus::lookup_set(context.sets, essay->set_id);
        const double clamped = std::clamp(ev.predictions[i], 0.0, 1.0);
        const int predicted = corpus::denormalize_score(clamped, set);
        ev.predicted_scores.push_back(predicted);
        ev.actual_scores.push_back(essay->raw_score);
        by_set[essay->set_id].push_back({predicted, essay->raw_score});
    }
    double total = 0.0;
    for (const auto& [set_id, pairs] : by_set) {
        const auto& set = corpus::lookup_set(context.sets, set_id);
        const double k = metrics::qwk(pairs, set.score_min, set.score_max);
        ev.qwk_per_set[set_id] = k;
        total += k;
    }
    ev.qwk = total / static_cast<double>(by_set.size());
    return ev;
}

template <typename T>
TrainResult train(model::EssayScorer<T>& model, const Dataset& train_data, const Dataset* dev,
                  const TrainConfig& config, const TrainingContext& context) {
    config.validate();
    if (train_data.role != corpus::Role::train) {
        throw corpus::LeakageError("train: batches drawn from a " + std::string(corpus::to_string(train_data.role)) +
                                   " partition");
    }
    if (dev && dev->role == corpus::Role::test) {
        throw corpus::LeakageError("train: checkpoint selection on a test partition");
    }
    if (train_data.examples.empty()) throw std::invalid_argument("train: empty training set");
    check_articles(model.config(), context, train_data);
    if (dev) check_articles(model.config(), context, *dev);

    TrainResult result;
    for (auto attr : model.config().gaze_attributes) {
        bool found = false;
        for (const auto& ex : train_data.examples) {
            for (const auto& [reader, binned] : ex.essay->gaze) found = found || binned.present_count() > 0;
        }
        if (!found) {
            result.warnings.push_back("gaze attribute " + std::string(gaze::short_name(attr)) +
                                      " is configured but no training essay has gaze data");
        }
    }
    if (context.log) {
        for (const auto& w : result.warnings) *context.log << "warning=\"" << w << "\"\n";
    }

    auto& params = model.parameters();
    numerics::RmsPropConfig opt;
    opt.learning_rate = config.learning_rate;
    opt.momentum = config.momentum;
    opt.decay_rate = config.decay_rate;
    opt.epsilon = config.epsilon;
    auto state = numerics::RmsPropState<T>::for_parameters(params, opt);

    auto metadata = model.config().to_map();
    for (const auto& [k, v] : config.to_map()) metadata[k] = v;
    result.checkpoint = numerics::make_checkpoint(params, metadata);
    double best_qwk = -std::numeric_limits<double>::infinity();

    std::vector<std::size_t> order(train_data.examples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle_rng(derive_seed(config.seed, "shuffle"));
    const std::uint64_t dropout_seed = derive_seed(config.seed, "dropout");
    const auto& weights = model.config().gaze_loss_weights;

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        EpochRecord record;
        record.epoch = epoch;
        std::size_t batch_index = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size, ++batch_index) {
            const std::size_t end = std::min(begin + config.batch_size, order.size());
            std::vector<const Example*> batch;
            for (std::size_t i = begin; i < end; ++i) batch.push_back(&train_data.examples[order[i]]);

            numerics::Graph<T> g(numerics::Mode::train, derive_seed(dropout_seed, (epoch << 32) | batch_index));
            auto loss = batch_loss(g, model, context, batch, nullptr);
            if (!std::isfinite(static_cast<double>(loss.total.item()))) {
                throw TrainingDivergedError(epoch, batch_index, params.value_norms(), "non-finite loss");
            }
            params.zero_grad();
            g.backward(loss.total);
            const double norm = config.clip_norm > 0.0 ? params.clip_grad_norm(config.clip_norm) : params.grad_norm();
            if (!std::isfinite(norm)) {
                throw TrainingDivergedError(epoch, batch_index, params.value_norms(), "non-finite gradient");
            }
            if (config.clip_norm > 0.0 && norm > config.clip_norm) ++record.clipped_batches;
            record.max_grad_norm = std::max(record.max_grad_norm, norm);
            numerics::rmsprop_step(params, state);
            record.train = batch_index == 0 ? loss.breakdown : LossBreakdown::merge(record.train, loss.breakdown, weights);
        }

        if (dev && !dev->examples.empty()) {
            record.dev_qwk = evaluate(model, *dev, context).qwk;
            if (record.dev_qwk > best_qwk) {
                best_qwk = record.dev_qwk;
                result.best_epoch = epoch;
                result.checkpoint = numerics::make_checkpoint(params, metadata);
            }
        }
        if (context.log) *context.log << format_epoch_line(record) << '\n';
        result.history.push_back(std::move(record));
    }

    if (!dev || dev->examples.empty()) {
        if (config.epochs > 0) {
            result.best_epoch = config.epochs;
            result.checkpoint = numerics::make_checkpoint(params, metadata);
        }
    } else {
        if (!result.history.empty()) result.best_dev_qwk = best_qwk;
        numerics::apply_checkpoint(result.checkpoint, params);
    }
    result.checkpoint.metadata["train.best_epoch"] = std::to_string(result.best_epoch);
    return result;
}

std::string format_epoch_line(const EpochRecord& r) {
    std::ostringstream out;
    out << "epoch=" << r.epoch << " score_mse=" << util::format_double(r.train.score_mse);
    for (const auto& [attr, v] : r.train.gaze_mse) {
        out << " gaze_mse." << gaze::short_name(attr) << '=' << util::format_double(v);
    }
    out << " gaze_tokens=" << r.train.gaze_token_count << " weighted_total=" << util::format_double(r.train.weighted_total)
        << " dev_qwk=" << (std::isnan(r.dev_qwk) ? std::string("nan") : util::format_double(r.dev_qwk))
        << " max_grad_norm=" << util::format_double(r.max_grad_norm) << " clipped_batches=" << r.clipped_batches;
    return out.str();
}

template Evaluation evaluate<float>(model::EssayScorer<float>&, const Dataset&, const TrainingContext&);
template Evaluation evaluate<double>(model::EssayScorer<double>&, const Dataset&, const TrainingContext&);
template TrainResult train<float>(model::EssayScorer<float>&, const Dataset&, const Dataset*, const TrainConfig&,
                                  const TrainingContext&);
template TrainResult train<double>(model::EssayScorer<double>&, const Dataset&, const Dataset*, const TrainConfig&,
                                   const TrainingContext&);

}  // namespace gazeaes::training
