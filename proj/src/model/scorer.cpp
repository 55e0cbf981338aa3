#include "gazeaes/model/scorer.hpp"

#include <sstream>
#include <stdexcept>

namespace gazeaes::model {

using numerics::Init;
using numerics::Shape;

namespace {

std::string head_name(gaze::GazeAttribute a, const char* part) {
    return "gaze." + std::string(gaze::short_name(a)) + "." + part;
}

}  // namespace

template <typename T>
EssayScorer<T>::EssayScorer(ModelConfig config, std::size_t vocab_rows, std::uint64_t seed)
    : config_(std::move(config)), vocab_rows_(vocab_rows), params_(seed) {
    config_.validate();
    if (vocab_rows_ < corpus::Vocabulary::kReserved) throw std::invalid_argument("vocabulary smaller than reserved rows");
    const std::size_t D = config_.embedding_dim, F = config_.conv_filters, H = config_.lstm_hidden;

    auto& embedding = params_.create("embedding", {vocab_rows_, D}, Init::small_uniform);
    auto pad = embedding.mutable_data().subspan(corpus::Vocabulary::kPad * D, D);
    std::fill(pad.begin(), pad.end(), T(0));
    if (!config_.train_embeddings) embedding.set_requires_grad(false);

    params_.create("conv.weight", {config_.conv_kernel, D, F}, Init::small_uniform);
    params_.create("conv.bias", {F}, Init::zeros);

    auto attention = [&](const std::string& prefix, std::size_t dim) {
        params_.create(prefix + ".W", {dim, dim}, Init::small_uniform);
        params_.create(prefix + ".b", {dim}, Init::zeros);
        params_.create(prefix + ".v", {dim, 1}, Init::small_uniform);
    };
    attention("word_attn", F);

    params_.create("lstm.W", {F, 4 * H}, Init::small_uniform);
    params_.create("lstm.U", {H, 4 * H}, Init::small_uniform);
    params_.create("lstm.b", {4 * H}, Init::zeros);
    attention("sent_attn", H);

    std::size_t modeling_in = H;
    if (config_.architecture == Architecture::co_attention) {
        params_.create("coattn.A", {H, H}, Init::small_uniform);
        attention("e2a_attn", H);
        attention("a2e_attn", H);
        modeling_in = 3 * H;
    }
    params_.create("dense.W", {modeling_in, config_.modeling_hidden}, Init::small_uniform);
    params_.create("dense.b", {config_.modeling_hidden}, Init::zeros);
    params_.create("out.W", {config_.modeling_hidden, 1}, Init::small_uniform);
    params_.create("out.b", {1}, Init::zeros);

    for (auto a : config_.gaze_attributes) {
        params_.create(head_name(a, "W"), {F, 1}, Init::small_uniform);
        params_.create(head_name(a, "b"), {1}, Init::zeros);
    }
}

template <typename T>
void EssayScorer<T>::load_embeddings(const corpus::EmbeddingTable& table) {
    if (table.rows != vocab_rows_ || table.dimension != config_.embedding_dim) {
        throw std::invalid_argument("embedding table is " + std::to_string(table.rows) + "x" +
                                    std::to_string(table.dimension) + ", model expects " +
                                    std::to_string(vocab_rows_) + "x" + std::to_string(config_.embedding_dim));
    }
    auto values = param("embedding").mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<T>(table.values[i]);
}

template <typename T>
Tensor<T> EssayScorer<T>::attention_pool(Graph<T>& g, const std::string& prefix, const Tensor<T>& h,
                                         Tensor<T>* weights) {
    auto u = g.tanh(g.add_bias(g.matmul(h, param(prefix + ".W")), param(prefix + ".b")));
    auto a = g.softmax(g.matmul(u, param(prefix + ".v")), 0);  // (L, 1)
    if (weights) *weights = a;
    return g.matmul(g.transpose(a), h);  // (1, d)
}

template <typename T>
SentenceEncoding<T> EssayScorer<T>::sentence_encode(Graph<T>& g, const corpus::TokenIds& ids) {
    SentenceEncoding<T> out;
    if (ids.empty()) {
        out.empty = true;
        out.pooled = Tensor<T>::zeros({1, config_.conv_filters});
        return out;
    }
    auto x = g.gather(param("embedding"), ids);
    x = g.dropout(x, config_.dropout);
    out.conv = g.tanh(g.conv1d(x, param("conv.weight"), param("conv.bias")));
    out.pooled = attention_pool(g, "word_attn", out.conv, &out.attention);
    return out;
}

template <typename T>
Tensor<T> EssayScorer<T>::lstm(Graph<T>& g, const Tensor<T>& inputs) {
    const std::size_t H = config_.lstm_hidden;
    const std::size_t steps = inputs.dim(0);
    // Input projections for all steps at once; the recurrence adds h U.
    auto projected = g.add_bias(g.matmul(inputs, param("lstm.W")), param("lstm.b"));
    Tensor<T> h, c;
    std::vector<Tensor<T>> outputs;
    outputs.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        auto z = g.slice(projected, 0, t, t + 1);
        if (t > 0) z = g.add(z, g.matmul(h, param("lstm.U")));
        auto i = g.sigmoid(g.slice(z, 1, 0, H));
        auto f = g.sigmoid(g.slice(z, 1, H, 2 * H));
        auto cand = g.tanh(g.slice(z, 1, 2 * H, 3 * H));
        auto o = g.sigmoid(g.slice(z, 1, 3 * H, 4 * H));
        c = t > 0 ? g.add(g.mul(f, c), g.mul(i, cand)) : g.mul(i, cand);
        h = g.mul(o, g.tanh(c));
        outputs.push_back(h);
    }
    return outputs.size() == 1 ? outputs[0] : g.concat(outputs, 0);
}

template <typename T>
EssayEncoding<T> EssayScorer<T>::essay_encode(Graph<T>& g, const std::vector<Tensor<T>>& sentence_vectors) {
    if (sentence_vectors.empty()) throw std::invalid_argument("essay_encode: no sentences");
    auto stacked = sentence_vectors.size() == 1 ? sentence_vectors[0] : g.concat(sentence_vectors, 0);
    EssayEncoding<T> out;
    out.hidden = lstm(g, stacked);
    out.pooled = attention_pool(g, "sent_attn", out.hidden, &out.attention);
    return out;
}

template <typename T>
CoAttention<T> EssayScorer<T>::coattend(Graph<T>& g, const Tensor<T>& essay_hidden, const Tensor<T>& article_hidden) {
    if (config_.architecture != Architecture::co_attention) {
        throw std::logic_error("coattend called on a self-attention model");
    }
    CoAttention<T> out;
    out.affinity = g.matmul(g.matmul(essay_hidden, param("coattn.A")), g.transpose(article_hidden));
    out.essay2article = g.matmul(g.softmax(out.affinity, 1), article_hidden);
    out.article2essay = g.matmul(g.softmax(g.transpose(out.affinity), 1), essay_hidden);
    return out;
}

template <typename T>
Tensor<T> EssayScorer<T>::score_head(Graph<T>& g, const Tensor<T>& essay_vector, const CoAttention<T>* co) {
    Tensor<T> features = essay_vector;
    if (config_.architecture == Architecture::co_attention) {
        if (!co) throw std::invalid_argument("score_head: co-attention model needs co-attention summaries");
        std::vector<Tensor<T>> parts{essay_vector, attention_pool(g, "e2a_attn", co->essay2article, nullptr),
                                     attention_pool(g, "a2e_attn", co->article2essay, nullptr)};
        features = g.concat(parts, 1);
    }
    features = g.dropout(features, config_.dropout);
    auto hidden = g.tanh(g.add_bias(g.matmul(features, param("dense.W")), param("dense.b")));
    return g.sigmoid(g.add_bias(g.matmul(hidden, param("out.W")), param("out.b")));
}

template <typename T>
std::map<gaze::GazeAttribute, Tensor<T>> EssayScorer<T>::gaze_heads(Graph<T>& g, const Tensor<T>& token_features) {
    std::map<gaze::GazeAttribute, Tensor<T>> out;
    for (auto a : config_.gaze_attributes) {
        out[a] = g.sigmoid(g.add_bias(g.matmul(token_features, param(head_name(a, "W"))), param(head_name(a, "b"))));
    }
    return out;
}

template <typename T>
EssayEncoding<T> EssayScorer<T>::encode_article(Graph<T>& g, const corpus::EncodedText& article) {
    std::vector<Tensor<T>> vectors;
    for (const auto& s : article) {
        if (!s.empty()) vectors.push_back(sentence_encode(g, s).pooled);
    }
    if (vectors.empty()) throw std::invalid_argument("source article has no tokens");
    return essay_encode(g, vectors);
}

template <typename T>
ForwardOutput<T> EssayScorer<T>::forward(Graph<T>& g, const corpus::EncodedText& essay,
                                         const EssayEncoding<T>* article) {
    if (config_.architecture == Architecture::co_attention && !article) {
        throw std::invalid_argument("co-attention model requires an encoded source article");
    }
    if (essay.empty()) throw std::invalid_argument("forward: essay has no sentences");
    ForwardOutput<T> out;
    std::vector<Tensor<T>> sentence_vectors;
    std::vector<Tensor<T>> conv_rows;
    for (const auto& ids : essay) {
        auto s = sentence_encode(g, ids);
        sentence_vectors.push_back(s.pooled);
        out.word_attention.push_back(s.attention);
        if (s.empty) {
            ++out.empty_sentences;
        } else {
            conv_rows.push_back(s.conv);
            out.token_count += ids.size();
        }
    }
    auto encoded = essay_encode(g, sentence_vectors);
    out.sentence_attention = encoded.attention;
    if (config_.architecture == Architecture::co_attention) {
        auto co = coattend(g, encoded.hidden, article->hidden);
        out.score = score_head(g, encoded.pooled, &co);
    } else {
        out.score = score_head(g, encoded.pooled, nullptr);
    }
    if (config_.has_gaze() && !conv_rows.empty()) {
        auto tokens = conv_rows.size() == 1 ? conv_rows[0] : g.concat(conv_rows, 0);
        out.gaze = gaze_heads(g, tokens);
    }
    return out;
}

template <typename T>
std::string EssayScorer<T>::summary() const {
    std::ostringstream out;
    out << "architecture " << to_string(config_.architecture) << '\n';
    params_.for_each([&](const std::string& name, const Tensor<T>& p) {
        out << name << ' ' << numerics::shape_to_string(p.shape()) << ' ' << p.numel();
        if (!p.requires_grad()) out << " frozen";
        out << '\n';
    });
    out << "total " << params_.total_elements() << '\n';
    return out.str();
}

template class EssayScorer<float>;
template class EssayScorer<double>;

}  // namespace gazeaes::model
