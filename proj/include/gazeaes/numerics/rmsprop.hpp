#pragma once

#include <map>
#include <string>
#include <vector>

#include "gazeaes/numerics/parameters.hpp"

namespace gazeaes::numerics {

struct RmsPropConfig {
    double learning_rate = 0.001;
    double momentum = 0.9;
    double decay_rate = 0.9;
    double epsilon = 1e-6;

    void validate() const;
};

/// Per-parameter optimizer buffers.
template <typename T>
struct RmsPropSlot {
    std::vector<T> mean_square;
    std::vector<T> velocity;
};

template <typename T>
struct RmsPropState {
    RmsPropConfig config;
    std::map<std::string, RmsPropSlot<T>> slots;

    /// One zeroed slot per parameter, shape-matched.
    static RmsPropState for_parameters(const ParameterSet<T>& params, RmsPropConfig config);
};

/// One RMSProp update with momentum on every parameter:
///   ms  <- decay * ms + (1 - decay) * g^2
///   v   <- momentum * v + lr * g / sqrt(ms + eps)
///   p   <- p - v
/// Throws std::invalid_argument if a parameter has no slot or a mismatched one.
template <typename T>
void rmsprop_step(ParameterSet<T>& params, RmsPropState<T>& state);

extern template struct RmsPropState<float>;
extern template struct RmsPropState<double>;
extern template void rmsprop_step<float>(ParameterSet<float>&, RmsPropState<float>&);
extern template void rmsprop_step<double>(ParameterSet<double>&, RmsPropState<double>&);

}  // namespace gazeaes::numerics
