#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gazeaes::numerics {

using Shape = std::vector<std::size_t>;

std::size_t element_count(const Shape& shape);
std::string shape_to_string(const Shape& shape);

/// Raised when op inputs have incompatible shapes. The message names the op
/// and the offending shapes.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class OpKind {
    leaf,
    matmul,
    add,
    mul,
    add_bias,
    concat,
    conv1d,
    sigmoid,
    tanh,
    softmax,
    masked_softmax,
    dropout,
    mse,
    masked_sse,
    gather,
    sum,
    transpose,
    slice,
    scale,
};

std::string_view to_string(OpKind kind);

/// Parses an op name such as "matmul". Throws std::invalid_argument for
/// names that do not correspond to a supported op.
OpKind parse_op_kind(std::string_view name);

template <typename T>
struct TensorNode {
    Shape shape;
    std::vector<T> data;
    std::vector<T> grad;  // empty until a gradient has been accumulated
    bool requires_grad = false;
    OpKind op = OpKind::leaf;
    const void* graph = nullptr;  // owning graph for op outputs, null for leaves
    std::vector<std::shared_ptr<TensorNode>> inputs;
    std::function<void(TensorNode&)> backward;

    std::vector<T>& ensure_grad() {
        if (grad.empty()) grad.assign(data.size(), T(0));
        return grad;
    }
};

/// Dense row-major array. Copies share the underlying node, so a Tensor is a
/// handle; use clone() for a deep copy.
template <typename T>
class Tensor {
public:
    using value_type = T;

    Tensor() = default;
    explicit Tensor(std::shared_ptr<TensorNode<T>> node) : node_(std::move(node)) {}

    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor full(Shape shape, T value, bool requires_grad = false);
    static Tensor from(Shape shape, std::vector<T> values, bool requires_grad = false);
    static Tensor scalar(T value, bool requires_grad = false);

    bool defined() const { return node_ != nullptr; }
    const Shape& shape() const { return node_->shape; }
    std::size_t rank() const { return node_->shape.size(); }
    std::size_t dim(std::size_t axis) const { return node_->shape.at(axis); }
    std::size_t numel() const { return node_->data.size(); }
    bool is_scalar() const { return numel() == 1; }

    std::span<const T> data() const { return node_->data; }
    std::span<T> mutable_data() { return node_->data; }
    std::vector<T> to_vector() const { return node_->data; }
    T item() const;
    T at(std::size_t i) const { return node_->data.at(i); }
    T at(std::size_t row, std::size_t col) const;

    bool requires_grad() const { return node_->requires_grad; }
    void set_requires_grad(bool flag) { node_->requires_grad = flag; }
    bool has_grad() const { return !node_->grad.empty(); }
    /// Gradient buffer; zeros when nothing has been accumulated yet.
    std::vector<T> grad() const;
    std::span<T> mutable_grad() { return node_->ensure_grad(); }
    void zero_grad();

    OpKind op() const { return node_->op; }
    bool is_leaf() const { return node_->op == OpKind::leaf; }

    Tensor clone() const;

    TensorNode<T>& node() const { return *node_; }
    const std::shared_ptr<TensorNode<T>>& node_ptr() const { return node_; }
    bool same_node(const Tensor& other) const { return node_ == other.node_; }

private:
    std::shared_ptr<TensorNode<T>> node_;
};

extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace gazeaes::numerics
