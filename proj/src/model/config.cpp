#include "gazeaes/model/config.hpp"

#include <algorithm>
#include <stdexcept>

#include "gazeaes/util/strings.hpp"

namespace gazeaes::model {

std::string to_string(Architecture a) {
    return a == Architecture::self_attention ? "self_attention" : "co_attention";
}

Architecture parse_architecture(const std::string& text) {
    if (text == "self_attention") return Architecture::self_attention;
    if (text == "co_attention") return Architecture::co_attention;
    throw std::invalid_argument("unknown architecture '" + text + "'");
}

void ModelConfig::validate() const {
    auto positive = [](std::size_t v, const char* name) {
        if (v == 0) throw std::invalid_argument(std::string("model.") + name + " must be positive");
    };
    positive(embedding_dim, "embedding_dim");
    positive(conv_filters, "conv_filters");
    positive(lstm_hidden, "lstm_hidden");
    positive(modeling_hidden, "modeling_hidden");
    positive(vocab_size, "vocab_size");
    if (conv_kernel % 2 == 0) throw std::invalid_argument("model.conv_kernel must be odd");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("model.dropout must lie in [0,1)");
    for (std::size_t i = 0; i < gaze_attributes.size(); ++i) {
        for (std::size_t j = i + 1; j < gaze_attributes.size(); ++j) {
            if (gaze_attributes[i] == gaze_attributes[j]) {
                throw std::invalid_argument("model.gaze_attributes lists " +
                                            std::string(gaze::short_name(gaze_attributes[i])) + " twice");
            }
        }
    }
    for (const auto& [attr, w] : gaze_loss_weights) {
        if (std::find(gaze_attributes.begin(), gaze_attributes.end(), attr) == gaze_attributes.end()) {
            throw std::invalid_argument("gaze loss weight given for unconfigured attribute " +
                                        std::string(gaze::short_name(attr)));
        }
        if (!(w >= 0.0)) throw std::invalid_argument("gaze loss weights must be non-negative");
    }
}

double ModelConfig::gaze_weight(gaze::GazeAttribute a) const {
    auto it = gaze_loss_weights.find(a);
    return it == gaze_loss_weights.end() ? 0.0 : it->second;
}

std::map<std::string, std::string> ModelConfig::to_map() const {
    std::map<std::string, std::string> m;
    m["model.embedding_dim"] = std::to_string(embedding_dim);
    m["model.conv_kernel"] = std::to_string(conv_kernel);
    m["model.conv_filters"] = std::to_string(conv_filters);
    m["model.lstm_hidden"] = std::to_string(lstm_hidden);
    m["model.modeling_hidden"] = std::to_string(modeling_hidden);
    m["model.dropout"] = util::format_double(dropout);
    m["model.vocab_size"] = std::to_string(vocab_size);
    m["model.train_embeddings"] = train_embeddings ? "true" : "false";
    m["model.architecture"] = to_string(architecture);
    std::vector<std::string> names;
    for (auto a : gaze_attributes) names.emplace_back(gaze::short_name(a));
    m["model.gaze_attributes"] = util::join(names, ",");
    for (auto a : gaze_attributes) {
        m["model.gaze_weight." + std::string(gaze::short_name(a))] = util::format_double(gaze_weight(a));
    }
    return m;
}

ModelConfig ModelConfig::from_map(const std::map<std::string, std::string>& values) {
    ModelConfig c;
    auto size_value = [](const std::string& key, const std::string& v) {
        auto n = util::parse_int(v);
        if (!n || *n < 0) throw std::invalid_argument(key + " expects a non-negative integer, got '" + v + "'");
        return static_cast<std::size_t>(*n);
    };
    auto real_value = [](const std::string& key, const std::string& v) {
        auto d = util::parse_double(v);
        if (!d) throw std::invalid_argument(key + " expects a number, got '" + v + "'");
        return *d;
    };
    std::map<gaze::GazeAttribute, double> weights;
    bool attributes_given = false;
    for (const auto& [key, v] : values) {
        if (!util::starts_with(key, "model.")) continue;
        if (key == "model.embedding_dim") c.embedding_dim = size_value(key, v);
        else if (key == "model.conv_kernel") c.conv_kernel = size_value(key, v);
        else if (key == "model.conv_filters") c.conv_filters = size_value(key, v);
        else if (key == "model.lstm_hidden") c.lstm_hidden = size_value(key, v);
        else if (key == "model.modeling_hidden") c.modeling_hidden = size_value(key, v);
        else if (key == "model.dropout") c.dropout = real_value(key, v);
        else if (key == "model.vocab_size") c.vocab_size = size_value(key, v);
        else if (key == "model.train_embeddings") c.train_embeddings = (v == "true" || v == "1" || v == "yes");
        else if (key == "model.architecture") c.architecture = parse_architecture(v);
        else if (key == "model.gaze_attributes") {
            attributes_given = true;
            c.gaze_attributes.clear();
            for (const auto& name : util::split(v, ',')) {
                const auto t = util::trim(name);
                if (!t.empty()) c.gaze_attributes.push_back(gaze::parse_gaze_attribute(t));
            }
        } else if (util::starts_with(key, "model.gaze_weight.")) {
            weights[gaze::parse_gaze_attribute(key.substr(18))] = real_value(key, v);
        } else {
            throw std::invalid_argument("unknown model option '" + key + "'");
        }
    }
    if (!attributes_given) {
        for (const auto& [a, w] : weights) c.gaze_attributes.push_back(a);
    }
    const auto defaults = default_gaze_weights();
    for (auto a : c.gaze_attributes) weights.emplace(a, defaults.at(a));  // unlisted weight -> tuned default
    c.gaze_loss_weights = weights;
    c.validate();
    return c;
}

std::map<gaze::GazeAttribute, double> default_gaze_weights() {
    using gaze::GazeAttribute;
    return {{GazeAttribute::dwell_time, 0.05},
            {GazeAttribute::first_fixation, 0.05},
            {GazeAttribute::is_regression, 0.01},
            {GazeAttribute::run_count, 0.01},
            {GazeAttribute::skip, 0.1}};
}

}  // namespace gazeaes::model
