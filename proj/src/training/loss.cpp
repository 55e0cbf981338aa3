#include "gazeaes/training/loss.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace gazeaes::training {

LossBreakdown LossBreakdown::merge(const LossBreakdown& a, const LossBreakdown& b,
                                   const std::map<gaze::GazeAttribute, double>& weights) {
    LossBreakdown m;
    m.essays = a.essays + b.essays;
    m.gaze_token_count = a.gaze_token_count + b.gaze_token_count;
    if (m.essays > 0) {
        m.score_mse = (a.score_mse * static_cast<double>(a.essays) + b.score_mse * static_cast<double>(b.essays)) /
                      static_cast<double>(m.essays);
    }
    auto keys = a.gaze_mse;
    keys.insert(b.gaze_mse.begin(), b.gaze_mse.end());
    for (const auto& [attr, unused] : keys) {
        const double sa = a.gaze_mse.count(attr) ? a.gaze_mse.at(attr) * static_cast<double>(a.gaze_token_count) : 0.0;
        const double sb = b.gaze_mse.count(attr) ? b.gaze_mse.at(attr) * static_cast<double>(b.gaze_token_count) : 0.0;
        m.gaze_mse[attr] = m.gaze_token_count > 0 ? (sa + sb) / static_cast<double>(m.gaze_token_count) : 0.0;
    }
    m.weighted_total = m.score_mse;
    for (const auto& [attr, v] : m.gaze_mse) {
        auto w = weights.find(attr);
        if (w != weights.end()) m.weighted_total += w->second * v;
    }
    return m;
}

template <typename T>
BatchLoss<T> multitask_loss(numerics::Graph<T>& g, std::span<const model::ForwardOutput<T>> outputs,
                            std::span<const corpus::Essay* const> essays,
                            const std::map<gaze::GazeAttribute, double>& weights) {
    using numerics::Tensor;
    if (outputs.empty()) throw std::invalid_argument("multitask_loss: empty batch");
    if (outputs.size() != essays.size()) throw std::invalid_argument("multitask_loss: outputs and essays differ in count");

    BatchLoss<T> result;
    LossBreakdown& b = result.breakdown;
    b.essays = outputs.size();

    std::vector<Tensor<T>> scores;
    std::vector<T> targets;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        scores.push_back(outputs[i].score);
        targets.push_back(static_cast<T>(essays[i]->normalized_score));
    }
    auto predicted = scores.size() == 1 ? scores[0] : g.concat(scores, 0);
    const std::size_t batch = outputs.size();
    auto score_loss = g.mse(predicted, Tensor<T>::from({batch, 1}, std::move(targets)));
    b.score_mse = static_cast<double>(score_loss.item());
    Tensor<T> total = score_loss;

    // Gather labeled tokens once; every attribute shares the presence mask.
    struct Labeled {
        std::size_t essay;
        Tensor<T> mask;
        const gaze::BinnedGaze* gaze;
    };
    std::vector<Labeled> labeled;
    for (std::size_t i = 0; i < batch; ++i) {
        for (const auto& [reader, binned] : essays[i]->gaze) {
            if (binned.tokens.size() != outputs[i].token_count) {
                throw std::invalid_argument("essay " + std::to_string(essays[i]->essay_id) + " reader " + reader +
                                            ": gaze covers " + std::to_string(binned.tokens.size()) +
                                            " tokens, prediction has " + std::to_string(outputs[i].token_count));
            }
            std::vector<T> mask(binned.tokens.size());
            std::size_t present = 0;
            for (std::size_t k = 0; k < mask.size(); ++k) {
                mask[k] = binned.tokens[k].present ? T(1) : T(0);
                present += binned.tokens[k].present;
            }
            if (present == 0) continue;
            b.gaze_token_count += present;
            const std::size_t n = mask.size();
            labeled.push_back({i, Tensor<T>::from({n, 1}, std::move(mask)), &binned});
        }
    }

    std::set<gaze::GazeAttribute> configured;
    for (const auto& out : outputs) {
        for (const auto& [attr, col] : out.gaze) configured.insert(attr);
    }
    b.weighted_total = b.score_mse;
    for (auto attr : configured) {
        const auto wit = weights.find(attr);
        const double weight = wit == weights.end() ? 0.0 : wit->second;
        double sse = 0.0;
        std::vector<Tensor<T>> terms;
        for (const auto& item : labeled) {
            const auto& pred = outputs[item.essay].gaze.at(attr);
            std::vector<T> target(item.gaze->tokens.size());
            for (std::size_t k = 0; k < target.size(); ++k) {
                target[k] = static_cast<T>(item.gaze->tokens[k].unit_target(attr));
                if (item.gaze->tokens[k].present) {
                    const double d = static_cast<double>(pred.at(k)) - static_cast<double>(target[k]);
                    sse += d * d;
                }
            }
            if (weight != 0.0) {
                const std::size_t n = target.size();
                terms.push_back(g.masked_sse(pred, Tensor<T>::from({n, 1}, std::move(target)), item.mask));
            }
        }
        const double mse = b.gaze_token_count > 0 ? sse / static_cast<double>(b.gaze_token_count) : 0.0;
        b.gaze_mse[attr] = mse;
        b.weighted_total += weight * mse;
        if (weight != 0.0 && !terms.empty()) {
            Tensor<T> acc = terms[0];
            for (std::size_t k = 1; k < terms.size(); ++k) acc = g.add(acc, terms[k]);
            total = g.add(total, g.scale(acc, weight / static_cast<double>(b.gaze_token_count)));
        }
    }
    result.total = total;
    return result;
}

template BatchLoss<float> multitask_loss<float>(numerics::Graph<float>&, std::span<const model::ForwardOutput<float>>,
                                                std::span<const corpus::Essay* const>,
                                                const std::map<gaze::GazeAttribute, double>&);
template BatchLoss<double> multitask_loss<double>(numerics::Graph<double>&,
                                                  std::span<const model::ForwardOutput<double>>,
                                                  std::span<const corpus::Essay* const>,
                                                  const std::map<gaze::GazeAttribute, double>&);

}  // namespace gazeaes::training
