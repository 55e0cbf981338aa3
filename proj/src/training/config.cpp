#include "gazeaes/training/config.hpp"

#include <cmath>
#include <stdexcept>

#include "gazeaes/util/strings.hpp"

namespace gazeaes::training {

void TrainConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (batch_size == 0) throw std::invalid_argument("train.batch_size must be positive");
    if (!positive(learning_rate)) throw std::invalid_argument("train.learning_rate must be positive");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("train.momentum must lie in [0,1)");
    if (!(decay_rate >= 0.0 && decay_rate < 1.0)) throw std::invalid_argument("train.decay_rate must lie in [0,1)");
    if (!positive(epsilon)) throw std::invalid_argument("train.epsilon must be positive");
    if (!(std::isfinite(clip_norm) && clip_norm >= 0.0)) throw std::invalid_argument("train.clip_norm must be >= 0");
    for (double w : gaze_weight_grid) {
        if (!(std::isfinite(w) && w >= 0.0)) throw std::invalid_argument("train.gaze_weight_grid values must be >= 0");
    }
}

std::map<std::string, std::string> TrainConfig::to_map() const {
    std::vector<std::string> grid;
    for (double w : gaze_weight_grid) grid.push_back(util::format_double(w));
    return {{"train.batch_size", std::to_string(batch_size)},
            {"train.epochs", std::to_string(epochs)},
            {"train.learning_rate", util::format_double(learning_rate)},
            {"train.momentum", util::format_double(momentum)},
            {"train.decay_rate", util::format_double(decay_rate)},
            {"train.epsilon", util::format_double(epsilon)},
            {"train.clip_norm", util::format_double(clip_norm)},
            {"train.seed", std::to_string(seed)},
            {"train.gaze_weight_grid", util::join(grid, ",")}};
}

TrainConfig TrainConfig::from_map(const std::map<std::string, std::string>& values) {
    TrainConfig c;
    auto count = [](const std::string& key, const std::string& v) {
        auto n = util::parse_int(v);
        if (!n || *n < 0) throw std::invalid_argument(key + " expects a non-negative integer, got '" + v + "'");
        return static_cast<std::size_t>(*n);
    };
    auto real = [](const std::string& key, const std::string& v) {
        auto d = util::parse_double(v);
        if (!d) throw std::invalid_argument(key + " expects a number, got '" + v + "'");
        return *d;
    };
    for (const auto& [key, v] : values) {
        if (!util::starts_with(key, "train.")) continue;
        if (key == "train.batch_size") c.batch_size = count(key, v);
        else if (key == "train.epochs") c.epochs = count(key, v);
        else if (key == "train.learning_rate") c.learning_rate = real(key, v);
        else if (key == "train.momentum") c.momentum = real(key, v);
        else if (key == "train.decay_rate") c.decay_rate = real(key, v);
        else if (key == "train.epsilon") c.epsilon = real(key, v);
        else if (key == "train.clip_norm") c.clip_norm = real(key, v);
        else if (key == "train.seed") c.seed = count(key, v);
        else if (key == "train.gaze_weight_grid") {
            c.gaze_weight_grid.clear();
            for (const auto& part : util::split(v, ',')) {
                const auto t = util::trim(part);
                if (!t.empty()) c.gaze_weight_grid.push_back(real(key, std::string(t)));
            }
        } else {
            throw std::invalid_argument("unknown training option '" + key + "'");
        }
    }
    c.validate();
    return c;
}

}  // namespace gazeaes::training
