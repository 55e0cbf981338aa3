#include "gazeaes/numerics/tensor.hpp"

#include <array>
#include <sstream>
#include <utility>

namespace gazeaes::numerics {

std::size_t element_count(const Shape& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

std::string shape_to_string(const Shape& shape) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) out << ',';
        out << shape[i];
    }
    out << ')';
    return out.str();
}

namespace {

constexpr std::array<std::pair<OpKind, std::string_view>, 19> kOpNames{{
    {OpKind::leaf, "leaf"},
    {OpKind::matmul, "matmul"},
    {OpKind::add, "add"},
    {OpKind::mul, "mul"},
    {OpKind::add_bias, "add_bias"},
    {OpKind::concat, "concat"},
    {OpKind::conv1d, "conv1d"},
    {OpKind::sigmoid, "sigmoid"},
    {OpKind::tanh, "tanh"},
    {OpKind::softmax, "softmax"},
    {OpKind::masked_softmax, "masked_softmax"},
    {OpKind::dropout, "dropout"},
    {OpKind::mse, "mse"},
    {OpKind::masked_sse, "masked_sse"},
    {OpKind::gather, "gather"},
    {OpKind::sum, "sum"},
    {OpKind::transpose, "transpose"},
    {OpKind::slice, "slice"},
    {OpKind::scale, "scale"},
}};

void validate_shape(const Shape& shape, std::size_t count) {
    for (std::size_t d : shape) {
        if (d == 0) throw ShapeError("tensor: zero-length dimension in shape " + shape_to_string(shape));
    }
    if (element_count(shape) != count) {
        throw ShapeError("tensor: shape " + shape_to_string(shape) + " holds " +
                         std::to_string(element_count(shape)) + " values, got " + std::to_string(count));
    }
}

}  // namespace

std::string_view to_string(OpKind kind) {
    for (const auto& [k, name] : kOpNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

OpKind parse_op_kind(std::string_view name) {
    for (const auto& [k, n] : kOpNames) {
        if (n == name && k != OpKind::leaf) return k;
    }
    throw std::invalid_argument("unknown op kind '" + std::string(name) + "'");
}

template <typename T>
Tensor<T> Tensor<T>::zeros(Shape shape, bool requires_grad) {
    return full(std::move(shape), T(0), requires_grad);
}

template <typename T>
Tensor<T> Tensor<T>::full(Shape shape, T value, bool requires_grad) {
    std::vector<T> values(element_count(shape), value);
    return from(std::move(shape), std::move(values), requires_grad);
}

template <typename T>
Tensor<T> Tensor<T>::from(Shape shape, std::vector<T> values, bool requires_grad) {
    validate_shape(shape, values.size());
    auto node = std::make_shared<TensorNode<T>>();
    node->shape = std::move(shape);
    node->data = std::move(values);
    node->requires_grad = requires_grad;
    return Tensor(std::move(node));
}

template <typename T>
Tensor<T> Tensor<T>::scalar(T value, bool requires_grad) {
    return from({}, {value}, requires_grad);
}

template <typename T>
T Tensor<T>::item() const {
    if (numel() != 1) {
        throw ShapeError("item: tensor of shape " + shape_to_string(shape()) + " is not a scalar");
    }
    return node_->data[0];
}

template <typename T>
T Tensor<T>::at(std::size_t row, std::size_t col) const {
    if (rank() != 2) throw ShapeError("at: expected rank-2 tensor, got " + shape_to_string(shape()));
    if (row >= dim(0) || col >= dim(1)) throw std::out_of_range("at: index out of range");
    return node_->data[row * dim(1) + col];
}

template <typename T>
std::vector<T> Tensor<T>::grad() const {
    if (node_->grad.empty()) return std::vector<T>(node_->data.size(), T(0));
    return node_->grad;
}

template <typename T>
void Tensor<T>::zero_grad() {
    node_->grad.assign(node_->data.size(), T(0));
}

template <typename T>
Tensor<T> Tensor<T>::clone() const {
    return from(shape(), node_->data, requires_grad());
}

template class Tensor<float>;
template class Tensor<double>;

}  // namespace gazeaes::numerics
