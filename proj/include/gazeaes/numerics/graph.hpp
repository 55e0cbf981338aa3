#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "gazeaes/numerics/random.hpp"
#include "gazeaes/numerics/tensor.hpp"

namespace gazeaes::numerics {

enum class Mode { train, eval };

/// Op parameters that are not tensors. Each op reads only the fields it
/// documents; the rest are ignored.
struct OpAttributes {
    std::size_t axis = 0;                  // concat, softmax, masked_softmax, slice
    std::size_t begin = 0;                 // slice
    std::size_t end = 0;                   // slice (exclusive)
    double rate = 0.0;                     // dropout probability
    double factor = 1.0;                   // scale
    std::vector<std::size_t> indices;      // gather row ids
};

/// Records every op applied through it (a tape) and runs reverse-mode
/// differentiation over that record.
///
/// Ops take their inputs as Tensor handles and return a new Tensor whose
/// node is appended to the tape. Leaves (parameters, constants) live outside
/// the tape. A Graph is single-use: build the forward pass, call backward()
/// once, then discard it.
///
/// Shape conventions: matrices are rank 2 (rows, cols); a "sequence" is a
/// matrix with one row per position; reductions return rank-0 tensors.
template <typename T>
class Graph {
public:
    explicit Graph(Mode mode = Mode::eval, std::uint64_t dropout_seed = 0)
        : mode_(mode), dropout_rng_(dropout_seed) {}

    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    Mode mode() const { return mode_; }
    std::size_t size() const { return tape_.size(); }
    std::span<const std::shared_ptr<TensorNode<T>>> tape() const { return tape_; }

    /// Generic dispatch used by tests and tooling; the typed helpers below
    /// forward here.
    Tensor<T> apply(OpKind kind, std::span<const Tensor<T>> inputs, const OpAttributes& attrs = {});

    /// (m,k) x (k,n) -> (m,n)
    Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b);
    Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
    Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);
    /// (m,n) + (n) broadcast over rows; also accepts (n) + (n).
    Tensor<T> add_bias(const Tensor<T>& x, const Tensor<T>& bias);
    Tensor<T> concat(std::span<const Tensor<T>> parts, std::size_t axis);
    /// Same-length 1-d convolution: input (L,Din), weight (k,Din,F), bias (F)
    /// -> (L,F), with (k-1)/2 zero padding on each side. k must be odd.
    Tensor<T> conv1d(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias);
    Tensor<T> sigmoid(const Tensor<T>& x);
    Tensor<T> tanh(const Tensor<T>& x);
    Tensor<T> softmax(const Tensor<T>& x, std::size_t axis);
    /// Softmax restricted to positions where mask != 0; masked positions get
    /// probability 0. A fully masked slice yields all zeros.
    Tensor<T> masked_softmax(const Tensor<T>& x, const Tensor<T>& mask, std::size_t axis);
    /// Inverted dropout in train mode, identity in eval mode.
    Tensor<T> dropout(const Tensor<T>& x, double rate);
    /// Mean of squared differences, rank-0 result.
    Tensor<T> mse(const Tensor<T>& prediction, const Tensor<T>& target);
    /// Sum of mask-weighted squared differences, rank-0 result.
    Tensor<T> masked_sse(const Tensor<T>& prediction, const Tensor<T>& target, const Tensor<T>& mask);
    /// Rows of a (V,D) table -> (n,D).
    Tensor<T> gather(const Tensor<T>& table, std::span<const std::size_t> rows);
    Tensor<T> sum(const Tensor<T>& x);
    Tensor<T> transpose(const Tensor<T>& x);
    /// Half-open [begin,end) along axis of a rank-1 or rank-2 tensor.
    Tensor<T> slice(const Tensor<T>& x, std::size_t axis, std::size_t begin, std::size_t end);
    Tensor<T> scale(const Tensor<T>& x, double factor);

    /// Reverse sweep from a scalar produced by this graph. Gradients of every
    /// tensor that feeds the graph are reset, then accumulated.
    void backward(const Tensor<T>& loss);

private:
    Tensor<T> record(OpKind kind, Shape shape, std::vector<T> data, std::vector<Tensor<T>> inputs,
                     std::function<void(TensorNode<T>&)> backward_fn);

    Mode mode_;
    Rng dropout_rng_;
    std::vector<std::shared_ptr<TensorNode<T>>> tape_;
};

extern template class Graph<float>;
extern template class Graph<double>;

}  // namespace gazeaes::numerics
