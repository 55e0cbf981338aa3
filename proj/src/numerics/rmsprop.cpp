#include "gazeaes/numerics/rmsprop.hpp"

#include <cmath>
#include <stdexcept>

namespace gazeaes::numerics {

void RmsPropConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("rmsprop: learning_rate must be positive");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("rmsprop: momentum must lie in [0,1)");
    if (!(decay_rate > 0.0 && decay_rate < 1.0)) throw std::invalid_argument("rmsprop: decay_rate must lie in (0,1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("rmsprop: epsilon must be positive");
}

template <typename T>
RmsPropState<T> RmsPropState<T>::for_parameters(const ParameterSet<T>& params, RmsPropConfig config) {
    config.validate();
    RmsPropState state;
    state.config = config;
    params.for_each([&](const std::string& name, const Tensor<T>& p) {
        state.slots[name] = RmsPropSlot<T>{std::vector<T>(p.numel(), T(0)), std::vector<T>(p.numel(), T(0))};
    });
    return state;
}

template <typename T>
void rmsprop_step(ParameterSet<T>& params, RmsPropState<T>& state) {
    const T decay = static_cast<T>(state.config.decay_rate);
    const T lr = static_cast<T>(state.config.learning_rate);
    const T momentum = static_cast<T>(state.config.momentum);
    const T eps = static_cast<T>(state.config.epsilon);
    params.for_each([&](const std::string& name, Tensor<T>& p) {
        auto it = state.slots.find(name);
        if (it == state.slots.end()) throw std::invalid_argument("rmsprop: no optimizer state for parameter '" + name + "'");
        auto& slot = it->second;
        if (slot.mean_square.size() != p.numel() || slot.velocity.size() != p.numel()) {
            throw std::invalid_argument("rmsprop: state shape mismatch for parameter '" + name + "'");
        }
        if (!p.requires_grad()) return;  // frozen
        if (!p.has_grad()) throw std::invalid_argument("rmsprop: gradient not populated for parameter '" + name + "'");
        auto values = p.mutable_data();
        const auto& grad = p.node().grad;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const T g = grad[i];
            slot.mean_square[i] = decay * slot.mean_square[i] + (T(1) - decay) * g * g;
            slot.velocity[i] = momentum * slot.velocity[i] + lr * g / std::sqrt(slot.mean_square[i] + eps);
            values[i] -= slot.velocity[i];
        }
    });
}

template struct RmsPropState<float>;
template struct RmsPropState<double>;
template void rmsprop_step<float>(ParameterSet<float>&, RmsPropState<float>&);
template void rmsprop_step<double>(ParameterSet<double>&, RmsPropState<double>&);

}  // namespace gazeaes::numerics
