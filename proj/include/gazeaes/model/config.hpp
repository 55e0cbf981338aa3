#pragma once

#include <map>
#include <string>
#include <vector>

#include "gazeaes/gaze/attributes.hpp"

namespace gazeaes::model {

enum class Architecture { self_attention, co_attention };

std::string to_string(Architecture a);
Architecture parse_architecture(const std::string& text);

struct ModelConfig {
    std::size_t embedding_dim = 50;
    std::size_t conv_kernel = 5;
    std::size_t conv_filters = 100;
    std::size_t lstm_hidden = 100;
    std::size_t modeling_hidden = 100;
    double dropout = 0.5;
    std::size_t vocab_size = 4000;  // maximum vocabulary, excluding PAD/UNK
    bool train_embeddings = true;
    Architecture architecture = Architecture::co_attention;
    std::vector<gaze::GazeAttribute> gaze_attributes;
    std::map<gaze::GazeAttribute, double> gaze_loss_weights;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    bool has_gaze() const { return !gaze_attributes.empty(); }
    double gaze_weight(gaze::GazeAttribute a) const;

    /// Flat string form used in checkpoints and manifests.
    std::map<std::string, std::string> to_map() const;
    /// Keys absent from `values` keep their defaults; unknown model.* keys are
    /// rejected.
    static ModelConfig from_map(const std::map<std::string, std::string>& values);
};

/// The per-attribute weights picked by grid search on the eye-tracking data:
/// DT 0.05, FFD 0.05, IR 0.01, RC 0.01, Skip 0.1.
std::map<gaze::GazeAttribute, double> default_gaze_weights();

}  // namespace gazeaes::model
