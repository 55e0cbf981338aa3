#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gazeaes/corpus/embeddings.hpp"
#include "gazeaes/corpus/vocabulary.hpp"
#include "gazeaes/model/config.hpp"
#include "gazeaes/numerics/graph.hpp"
#include "gazeaes/numerics/parameters.hpp"

namespace gazeaes::model {

using numerics::Graph;
using numerics::ParameterSet;
using numerics::Tensor;

template <typename T>
struct SentenceEncoding {
    Tensor<T> pooled;     // (1, F)
    Tensor<T> conv;       // (L, F) after tanh; undefined for an empty sentence
    Tensor<T> attention;  // (L, 1); undefined for an empty sentence
    bool empty = false;   // no tokens: pooled is a zero constant
};

template <typename T>
struct EssayEncoding {
    Tensor<T> hidden;     // (S, H) LSTM outputs
    Tensor<T> pooled;     // (1, H)
    Tensor<T> attention;  // (S, 1)
};

template <typename T>
struct CoAttention {
    Tensor<T> affinity;       // (n, m)
    Tensor<T> essay2article;  // (n, H)
    Tensor<T> article2essay;  // (m, H)
};

template <typename T>
struct ForwardOutput {
    Tensor<T> score;  // (1, 1), in (0, 1)
    /// One (tokens, 1) column per configured attribute; absent for an essay
    /// without tokens.
    std::map<gaze::GazeAttribute, Tensor<T>> gaze;
    std::vector<Tensor<T>> word_attention;  // per sentence, undefined when empty
    Tensor<T> sentence_attention;
    std::size_t token_count = 0;
    std::size_t empty_sentences = 0;
};

/// Hierarchical essay scorer: word convolution with attention pooling,
/// sentence LSTM with attention pooling, optional co-attention against a
/// source article, a dense modeling layer and per-token gaze heads on the
/// convolution output.
template <typename T>
class EssayScorer {
public:
    /// `vocab_rows` is the embedding table height (vocabulary incl. PAD/UNK).
    EssayScorer(ModelConfig config, std::size_t vocab_rows, std::uint64_t seed);

    const ModelConfig& config() const { return config_; }
    std::size_t vocab_rows() const { return vocab_rows_; }
    ParameterSet<T>& parameters() { return params_; }
    const ParameterSet<T>& parameters() const { return params_; }

    /// Copies pretrained rows into the embedding parameter.
    void load_embeddings(const corpus::EmbeddingTable& table);

    SentenceEncoding<T> sentence_encode(Graph<T>& g, const corpus::TokenIds& ids);
    EssayEncoding<T> essay_encode(Graph<T>& g, const std::vector<Tensor<T>>& sentence_vectors);
    CoAttention<T> coattend(Graph<T>& g, const Tensor<T>& essay_hidden, const Tensor<T>& article_hidden);
    /// Self-attention mode ignores `co`.
    Tensor<T> score_head(Graph<T>& g, const Tensor<T>& essay_vector, const CoAttention<T>* co);
    std::map<gaze::GazeAttribute, Tensor<T>> gaze_heads(Graph<T>& g, const Tensor<T>& token_features);

    /// Sentence encoding + LSTM for a source article. Encode once per graph
    /// and pass the result to every forward() in that graph.
    EssayEncoding<T> encode_article(Graph<T>& g, const corpus::EncodedText& article);

    /// Throws std::invalid_argument in co-attention mode when `article` is null.
    ForwardOutput<T> forward(Graph<T>& g, const corpus::EncodedText& essay, const EssayEncoding<T>* article);

    /// Layer names, shapes and parameter counts, one per line.
    std::string summary() const;

private:
    Tensor<T> attention_pool(Graph<T>& g, const std::string& prefix, const Tensor<T>& h, Tensor<T>* weights);
    Tensor<T> lstm(Graph<T>& g, const Tensor<T>& inputs);
    Tensor<T>& param(const std::string& name) { return params_.get(name); }

    ModelConfig config_;
    std::size_t vocab_rows_;
    ParameterSet<T> params_;
};

extern template class EssayScorer<float>;
extern template class EssayScorer<double>;

}  // namespace gazeaes::model
