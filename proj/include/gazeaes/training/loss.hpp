#pragma once

#include <map>
#include <span>
#include <vector>

#include "gazeaes/corpus/essay.hpp"
#include "gazeaes/model/scorer.hpp"

namespace gazeaes::training {

struct LossBreakdown {
    double score_mse = 0.0;
    std::size_t essays = 0;
    std::map<gaze::GazeAttribute, double> gaze_mse;  // per labeled (essay, reader, token)
    std::size_t gaze_token_count = 0;                // labeled triples, shared by all attributes
    double weighted_total = 0.0;

    /// Essay-count and token-count weighted merge of two breakdowns.
    /// `weights` recomputes weighted_total for the merged values.
    static LossBreakdown merge(const LossBreakdown& a, const LossBreakdown& b,
                               const std::map<gaze::GazeAttribute, double>& weights);
};

template <typename T>
struct BatchLoss {
    numerics::Tensor<T> total;  // scalar node to differentiate
    LossBreakdown breakdown;
};

/// score_mse over the batch plus, for every configured attribute, its weight
/// times the mean squared error over labeled tokens. Attributes whose weight
/// is zero are reported but add no node to the graph, so they cannot change
/// any gradient. Throws std::invalid_argument for an empty batch or a gaze
/// sequence whose length differs from the essay's predictions.
template <typename T>
BatchLoss<T> multitask_loss(numerics::Graph<T>& g, std::span<const model::ForwardOutput<T>> outputs,
                            std::span<const corpus::Essay* const> essays,
                            const std::map<gaze::GazeAttribute, double>& weights);

}  // namespace gazeaes::training
