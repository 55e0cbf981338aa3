#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gazeaes::training {

struct TrainConfig {
    std::size_t batch_size = 100;
    std::size_t epochs = 100;
    double learning_rate = 0.001;
    double momentum = 0.9;
    double decay_rate = 0.9;
    double epsilon = 1e-6;
    double clip_norm = 10.0;  // global gradient norm; 0 disables
    std::uint64_t seed = 0;
    std::vector<double> gaze_weight_grid{0.5, 0.1, 0.05, 0.01, 0.001};

    void validate() const;
    std::map<std::string, std::string> to_map() const;
    /// Reads train.* keys; other prefixes are ignored, unknown train.* keys
    /// are rejected.
    static TrainConfig from_map(const std::map<std::string, std::string>& values);
};

}  // namespace gazeaes::training
