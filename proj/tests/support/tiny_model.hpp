#pragma once

// End-to-end gradient check on a deliberately small scorer.

#include "finite_difference.hpp"
#include "gazeaes/model/scorer.hpp"

namespace gazeaes::test_support {

inline model::ModelConfig tiny_config(model::Architecture arch, bool gaze) {
    model::ModelConfig c;
    c.embedding_dim = 4;
    c.conv_kernel = 3;
    c.conv_filters = 3;
    c.lstm_hidden = 3;
    c.modeling_hidden = 3;
    c.vocab_size = 10;
    c.dropout = 0.5;
    c.architecture = arch;
    if (gaze) {
        c.gaze_attributes.assign(gaze::kAllGazeAttributes.begin(), gaze::kAllGazeAttributes.end());
        c.gaze_loss_weights = model::default_gaze_weights();
    }
    return c;
}

/// Random essay/article over a 12-row vocabulary (ids 1..11; 1 is UNK),
/// random parameter values in [-0.5, 0.5], then the full forward output
/// (score plus every gaze column) is checked against central differences
/// with respect to every parameter.
template <typename T>
GradCheckResult tiny_model_gradient_check(std::uint64_t seed, model::Architecture arch) {
    Rng rng(seed);
    model::EssayScorer<T> scorer(tiny_config(arch, true), 12, seed);
    scorer.parameters().for_each([&](const std::string&, numerics::Tensor<T>& p) {
        for (auto& v : p.mutable_data()) v = static_cast<T>(rng.uniform(-0.5, 0.5));
    });
    auto random_text = [&](std::size_t max_sentences) {
        corpus::EncodedText text(1 + rng.below(max_sentences));
        for (auto& s : text) {
            s.resize(1 + rng.below(5));
            for (auto& id : s) id = 1 + rng.below(11);
        }
        return text;
    };
    const auto essay = random_text(3);
    const auto article = random_text(3);

    std::vector<numerics::Tensor<T>> params;
    scorer.parameters().for_each([&](const std::string&, numerics::Tensor<T>& p) { params.push_back(p); });

    Builder<T> build = [&](numerics::Graph<T>& g, std::vector<numerics::Tensor<T>>&) {
        model::EssayEncoding<T> encoded_article;
        const model::EssayEncoding<T>* art = nullptr;
        if (arch == model::Architecture::co_attention) {
            encoded_article = scorer.encode_article(g, article);
            art = &encoded_article;
        }
        auto out = scorer.forward(g, essay, art);
        std::vector<numerics::Tensor<T>> parts{out.score};
        for (auto& [a, col] : out.gaze) parts.push_back(g.transpose(col));
        return g.concat(parts, 1);
    };
    return check_gradients<T>(build, params, seed);
}

}  // namespace gazeaes::test_support
