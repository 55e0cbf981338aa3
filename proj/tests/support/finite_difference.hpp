#pragma once

// Central finite-difference oracle for checking reverse-mode gradients.
// Deliberately independent of Graph::backward: it only evaluates forward
// passes on perturbed copies of the inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gazeaes/numerics/graph.hpp"
#include "gazeaes/numerics/random.hpp"

namespace gazeaes::test_support {

template <typename T>
using Builder = std::function<numerics::Tensor<T>(numerics::Graph<T>&, std::vector<numerics::Tensor<T>>&)>;

struct GradCheckResult {
    double max_error = 0.0;  // worst relative error over all checked entries
    std::size_t checked = 0;
    std::string worst_location;
};

template <typename T>
struct GradCheckTolerances;

template <>
struct GradCheckTolerances<double> {
    static constexpr double step = 1e-5;
    static constexpr double floor = 1e-6;  // magnitude below which errors are measured absolutely
    static constexpr double limit = 1e-4;
};

template <>
struct GradCheckTolerances<float> {
    static constexpr double step = 1e-2;
    static constexpr double floor = 1e-2;
    static constexpr double limit = 1e-2;
};

inline double relative_error(double analytic, double numeric, double floor) {
    return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

/// Reduces the builder output to a scalar with fixed random coefficients and
/// compares d(loss)/d(input) against central differences for every input
/// that requires grad.
template <typename T>
GradCheckResult check_gradients(const Builder<T>& build, std::vector<numerics::Tensor<T>> inputs,
                                std::uint64_t seed, numerics::Mode mode = numerics::Mode::train) {
    using numerics::Graph;
    using numerics::Tensor;
    const double step = GradCheckTolerances<T>::step;
    const double floor = GradCheckTolerances<T>::floor;
    const std::uint64_t dropout_seed = derive_seed(seed, "dropout");

    Tensor<T> coeffs;
    auto evaluate = [&](std::vector<Tensor<T>>& xs) -> double {
        Graph<T> g(mode, dropout_seed);
        Tensor<T> out = build(g, xs);
        double acc = 0.0;
        for (std::size_t i = 0; i < out.numel(); ++i) {
            acc += static_cast<double>(out.data()[i]) * static_cast<double>(coeffs.data()[i]);
        }
        return acc;
    };

    // Analytic pass.
    Graph<T> g(mode, dropout_seed);
    Tensor<T> out = build(g, inputs);
    {
        Rng rng(derive_seed(seed, "coefficients"));
        std::vector<T> c(out.numel());
        for (auto& v : c) v = static_cast<T>(rng.uniform(-1.0, 1.0));
        coeffs = Tensor<T>::from(out.shape(), std::move(c));
    }
    Tensor<T> loss = g.sum(g.mul(out, coeffs));
    g.backward(loss);

    std::vector<std::vector<T>> analytic;
    for (auto& x : inputs) analytic.push_back(x.grad());

    GradCheckResult result;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        if (!inputs[k].requires_grad()) continue;
        auto values = inputs[k].mutable_data();
        for (std::size_t i = 0; i < values.size(); ++i) {
            const T original = values[i];
            values[i] = static_cast<T>(static_cast<double>(original) + step);
            const double up = evaluate(inputs);
            values[i] = static_cast<T>(static_cast<double>(original) - step);
            const double down = evaluate(inputs);
            values[i] = original;
            const double numeric = (up - down) / (2.0 * step);
            const double err = relative_error(static_cast<double>(analytic[k][i]), numeric, floor);
            ++result.checked;
            if (err > result.max_error) {
                result.max_error = err;
                result.worst_location = "input " + std::to_string(k) + " element " + std::to_string(i) +
                                        " analytic=" + std::to_string(static_cast<double>(analytic[k][i])) +
                                        " numeric=" + std::to_string(numeric);
            }
        }
    }
    return result;
}

}  // namespace gazeaes::test_support
