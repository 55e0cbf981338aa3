#include "gazeaes/numerics/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

namespace gazeaes::numerics {

namespace {

std::string describe(OpKind kind) { return std::string(to_string(kind)); }

[[noreturn]] void shape_mismatch(OpKind kind, const Shape& a, const Shape& b, const std::string& why = {}) {
    std::string msg = describe(kind) + ": incompatible shapes " + shape_to_string(a) + " and " + shape_to_string(b);
    if (!why.empty()) msg += " (" + why + ")";
    throw ShapeError(msg);
}

[[noreturn]] void bad_shape(OpKind kind, const Shape& a, const std::string& why) {
    throw ShapeError(describe(kind) + ": invalid shape " + shape_to_string(a) + " (" + why + ")");
}

template <typename T>
T stable_sigmoid(T x) {
    if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
    T e = std::exp(x);
    return e / (T(1) + e);
}

/// Decomposes a rank-1/2 tensor into (outer, n, inner) around `axis` so that
/// element (o, i, j) lives at o*n*inner + i*inner + j.
struct AxisView {
    std::size_t outer;
    std::size_t n;
    std::size_t inner;
};

AxisView axis_view(OpKind kind, const Shape& shape, std::size_t axis) {
    if (shape.empty() || shape.size() > 2) bad_shape(kind, shape, "expected rank 1 or 2");
    if (axis >= shape.size()) bad_shape(kind, shape, "axis " + std::to_string(axis) + " out of range");
    if (shape.size() == 1) return {1, shape[0], 1};
    if (axis == 0) return {1, shape[0], shape[1]};
    return {shape[0], shape[1], 1};
}

template <typename T>
void softmax_forward(std::span<const T> x, std::span<const T> mask, AxisView v, std::vector<T>& y) {
    const bool masked = !mask.empty();
    for (std::size_t o = 0; o < v.outer; ++o) {
        for (std::size_t j = 0; j < v.inner; ++j) {
            const std::size_t base = o * v.n * v.inner + j;
            T max_val = -std::numeric_limits<T>::infinity();
            bool any = false;
            for (std::size_t i = 0; i < v.n; ++i) {
                const std::size_t idx = base + i * v.inner;
                if (masked && mask[idx] == T(0)) continue;
                max_val = std::max(max_val, x[idx]);
                any = true;
            }
            if (!any) {
                for (std::size_t i = 0; i < v.n; ++i) y[base + i * v.inner] = T(0);
                continue;
            }
            T total = T(0);
            for (std::size_t i = 0; i < v.n; ++i) {
                const std::size_t idx = base + i * v.inner;
                if (masked && mask[idx] == T(0)) {
                    y[idx] = T(0);
                } else {
                    y[idx] = std::exp(x[idx] - max_val);
                    total += y[idx];
                }
            }
            for (std::size_t i = 0; i < v.n; ++i) y[base + i * v.inner] /= total;
        }
    }
}

template <typename T>
void softmax_backward(std::span<const T> y, std::span<const T> gy, AxisView v, std::vector<T>& gx) {
    for (std::size_t o = 0; o < v.outer; ++o) {
        for (std::size_t j = 0; j < v.inner; ++j) {
            const std::size_t base = o * v.n * v.inner + j;
            T dot = T(0);
            for (std::size_t i = 0; i < v.n; ++i) dot += y[base + i * v.inner] * gy[base + i * v.inner];
            for (std::size_t i = 0; i < v.n; ++i) {
                const std::size_t idx = base + i * v.inner;
                gx[idx] += y[idx] * (gy[idx] - dot);
            }
        }
    }
}

}  // namespace

template <typename T>
Tensor<T> Graph<T>::record(OpKind kind, Shape shape, std::vector<T> data, std::vector<Tensor<T>> inputs,
                           std::function<void(TensorNode<T>&)> backward_fn) {
    auto node = std::make_shared<TensorNode<T>>();
    node->shape = std::move(shape);
    node->data = std::move(data);
    node->op = kind;
    node->graph = this;
    for (const auto& in : inputs) {
        if (in.requires_grad()) node->requires_grad = true;
    }
    if (node->requires_grad) {
        node->inputs.reserve(inputs.size());
        for (auto& in : inputs) node->inputs.push_back(in.node_ptr());
        node->backward = std::move(backward_fn);
    }
    tape_.push_back(node);
    return Tensor<T>(std::move(node));
}

template <typename T>
Tensor<T> Graph<T>::apply(OpKind kind, std::span<const Tensor<T>> in, const OpAttributes& attrs) {
    auto need = [&](std::size_t n) {
        if (in.size() != n) {
            throw std::invalid_argument(describe(kind) + ": expected " + std::to_string(n) + " inputs, got " +
                                        std::to_string(in.size()));
        }
        for (const auto& t : in) {
            if (!t.defined()) throw std::invalid_argument(describe(kind) + ": undefined input tensor");
        }
    };
    switch (kind) {
        case OpKind::matmul: need(2); return matmul(in[0], in[1]);
        case OpKind::add: need(2); return add(in[0], in[1]);
        case OpKind::mul: need(2); return mul(in[0], in[1]);
        case OpKind::add_bias: need(2); return add_bias(in[0], in[1]);
        case OpKind::concat: return concat(in, attrs.axis);
        case OpKind::conv1d: need(3); return conv1d(in[0], in[1], in[2]);
        case OpKind::sigmoid: need(1); return sigmoid(in[0]);
        case OpKind::tanh: need(1); return tanh(in[0]);
        case OpKind::softmax: need(1); return softmax(in[0], attrs.axis);
        case OpKind::masked_softmax: need(2); return masked_softmax(in[0], in[1], attrs.axis);
        case OpKind::dropout: need(1); return dropout(in[0], attrs.rate);
        case OpKind::mse: need(2); return mse(in[0], in[1]);
        case OpKind::masked_sse: need(3); return masked_sse(in[0], in[1], in[2]);
        case OpKind::gather: need(1); return gather(in[0], attrs.indices);
        case OpKind::sum: need(1); return sum(in[0]);
        case OpKind::transpose: need(1); return transpose(in[0]);
        case OpKind::slice: need(1); return slice(in[0], attrs.axis, attrs.begin, attrs.end);
        case OpKind::scale: need(1); return scale(in[0], attrs.factor);
        case OpKind::leaf: break;
    }
    throw std::invalid_argument("unknown op kind " + std::to_string(static_cast<int>(kind)));
}

template <typename T>
Tensor<T> Graph<T>::matmul(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
        shape_mismatch(OpKind::matmul, a.shape(), b.shape(), "expected (m,k) x (k,n)");
    }
    const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
    std::vector<T> out(m * n, T(0));
    const auto ad = a.data();
    const auto bd = b.data();
    for (std::size_t i = 0; i < m; ++i) {
        T* row = out.data() + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const T av = ad[i * k + p];
            if (av == T(0)) continue;
            const T* brow = bd.data() + p * n;
            for (std::size_t j = 0; j < n; ++j) row[j] += av * brow[j];
        }
    }
    return record(OpKind::matmul, {m, n}, std::move(out), {a, b}, [m, k, n](TensorNode<T>& self) {
        auto& A = *self.inputs[0];
        auto& B = *self.inputs[1];
        const auto& g = self.grad;
        if (A.requires_grad) {
            auto& ga = A.ensure_grad();
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t p = 0; p < k; ++p) {
                    T acc = T(0);
                    const T* brow = B.data.data() + p * n;
                    const T* grow = g.data() + i * n;
                    for (std::size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
                    ga[i * k + p] += acc;
                }
            }
        }
        if (B.requires_grad) {
            auto& gb = B.ensure_grad();
            for (std::size_t i = 0; i < m; ++i) {
                const T* grow = g.data() + i * n;
                for (std::size_t p = 0; p < k; ++p) {
                    const T av = A.data[i * k + p];
                    T* gbrow = gb.data() + p * n;
                    for (std::size_t j = 0; j < n; ++j) gbrow[j] += av * grow[j];
                }
            }
        }
    });
}

template <typename T>
Tensor<T> Graph<T>::add(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.shape() != b.shape()) shape_mismatch(OpKind::add, a.shape(), b.shape());
    std::vector<T> out(a.numel());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + b.data()[i];
    return record(OpKind::add, a.shape(), std::move(out), {a, b}, [](TensorNode<T>& self) {
        for (auto& in : self.inputs) {
            if (!in->requires_grad) continue;
            auto& g = in->ensure_grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
        }
    });
}

template <typename T>
Tensor<T> Graph<T>::mul(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.shape() != b.shape()) shape_mismatch(OpKind::mul, a.shape(), b.shape());
    std::vector<T> out(a.numel());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] * b.data()[i];
    return record(OpKind::mul, a.shape(), std::move(out), {a, b}, [](TensorNode<T>& self) {
        auto& A = *self.inputs[0];
        auto& B = *self.inputs[1];
        if (A.requires_grad) {
            auto& g = A.ensure_grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * B.data[i];
        }
        if (B.requires_grad) {
            auto& g = B.ensure_grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * A.data[i];
        }
    });
}

template <typename T>
Tensor<T> Graph<T>::add_bias(const Tensor<T>& x, const Tensor<T>& bias) {
    const std::size_t cols = x.rank() == 0 ? 0 : x.shape().back();
    const bool bias_ok = (bias.rank() == 1 && bias.dim(0) == cols) ||
                         (bias.rank() == 2 && bias.dim(0) == 1 && bias.dim(1) == cols);
    if (x.rank() < 1 || x.rank() > 2 || !bias_ok) {
        shape_mismatch(OpKind::add_bias, x.shape(), bias.shape(), "bias length must equal the last dimension");
    }
    const std::size_t rows = x.numel() / cols;
    std::vector<T> out(x.numel());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] = x.data()[r * cols + c] + bias.data()[c];
    }
    return record(OpKind::add_bias, x.shape(), std::move(out), {x, bias}, [rows, cols](TensorNode<T>& self) {
        auto& X = *self.inputs[0];
        auto& B = *self.inputs[1];
        if (X.requires_grad) {
            auto& g = X.ensure_grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
        }
        if (B.requires_grad) {
            auto& g = B.ensure_grad();
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t c = 0; c < cols; ++c) g[c] += self.grad[r * cols + c];
            }
        }
    });
}

template <typename T>
Tensor<T> Graph<T>::concat(std::span<const Tensor<T>> parts, std::size_t axis) {
    if (parts.empty()) throw std::invalid_argument("concat: no inputs");
    const Shape& first = parts[0].shape();
    if (first.empty() || first.size() > 2 || axis >= first.size()) {
        bad_shape(OpKind::concat, first, "concat needs rank 1 or 2 and a valid axis");
    }
    Shape out_shape = first;
    out_shape[axis] = 0;
    for (const auto& p : parts) {
        if (p.rank() != first.size()) shape_mismatch(OpKind::concat, first, p.shape(), "rank differs");
        for (std::size_t d = 0; d < first.size(); ++d) {
            if (d != axis && p.dim(d) != first[d]) shape_mismatch(OpKind::concat, first, p.shape());
        }
        out_shape[axis] += p.dim(axis);
    }
    // outer: number of independent blocks; widths: contiguous run per part per block
    const std::size_t outer = (first.size() == 2 && axis == 1) ? first[0] : 1;
    std::vector<std::size_t> widths;
    widths.reserve(parts.size());
    for (const auto& p : parts) widths.push_back(p.numel() / outer);
    const std::size_t total_width = element_count(out_shape) / outer;

    std::vector<T> out(element_count(out_shape));
    for (std::size_t o = 0; o < outer; ++o) {
        std::size_t offset = o * total_width;
        for (std::size_t p = 0; p < parts.size(); ++p) {
            const auto d = parts[p].data();
            std::copy_n(d.begin() + static_cast<std::ptrdiff_t>(o * widths[p]), widths[p], out.begin() + static_cast<std::ptrdiff_t>(offset));
            offset += widths[p];
        }
    }
    std::vector<Tensor<T>> inputs(parts.begin(), parts.end());
    return record(OpKind::concat, out_shape, std::move(out), std::move(inputs),
                  [outer, widths, total_width](TensorNode<T>& self) {
                      for (std::size_t o = 0; o < outer; ++o) {
                          std::size_t offset = o * total_width;
                          for (std::size_t p = 0; p < self.inputs.size(); ++p) {
                              auto& in = *self.inputs[p];
                              if (in.requires_grad) {
                                  auto& g = in.ensure_grad();
                                  for (std::size_t i = 0; i < widths[p]; ++i) g[o * widths[p] + i] += self.grad[offset + i];
                              }
                              offset += widths[p];
                          }
                      }
                  });
}

template <typename T>
Tensor<T> Graph<T>::conv1d(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias) {
    if (input.rank() != 2 || weight.rank() != 3 || weight.dim(1) != input.dim(1)) {
        shape_mismatch(OpKind::conv1d, input.shape(), weight.shape(), "expected input (L,Din) and weight (k,Din,F)");
    }
    const std::size_t k = weight.dim(0);
    if (k % 2 == 0) bad_shape(OpKind::conv1d, weight.shape(), "kernel width must be odd for same-length padding");
    const std::size_t filters = weight.dim(2);
    if (bias.rank() != 1 || bias.dim(0) != filters) {
        shape_mismatch(OpKind::conv1d, weight.shape(), bias.shape(), "bias length must equal filter count");
    }
    const std::size_t len = input.dim(0), din = input.dim(1);
    const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>((k - 1) / 2);
    const auto x = input.data();
    const auto w = weight.data();
    const auto b = bias.data();

    std::vector<T> out(len * filters);
    for (std::size_t t = 0; t < len; ++t) {
        T* y = out.data() + t * filters;
        std::copy(b.begin(), b.end(), y);
        for (std::size_t j = 0; j < k; ++j) {
            const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + j) - pad;
            if (src < 0 || src >= static_cast<std::ptrdiff_t>(len)) continue;
            const T* xrow = x.data() + static_cast<std::size_t>(src) * din;
            const T* wj = w.data() + j * din * filters;
            for (std::size_t d = 0; d < din; ++d) {
                const T xv = xrow[d];
                const T* wrow = wj + d * filters;
                for (std::size_t f = 0; f < filters; ++f) y[f] += xv * wrow[f];
            }
        }
    }
    return record(OpKind::conv1d, {len, filters}, std::move(out), {input, weight, bias},
                  [len, din, k, filters, pad](TensorNode<T>& self) {
                      auto& X = *self.inputs[0];
                      auto& W = *self.inputs[1];
                      auto& B = *self.inputs[2];
                      const auto& gy = self.grad;
                      T* gx = X.requires_grad ? X.ensure_grad().data() : nullptr;
                      T* gw = W.requires_grad ? W.ensure_grad().data() : nullptr;
                      for (std::size_t t = 0; t < len; ++t) {
                          const T* grow = gy.data() + t * filters;
                          for (std::size_t j = 0; j < k; ++j) {
                              const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + j) - pad;
                              if (src < 0 || src >= static_cast<std::ptrdiff_t>(len)) continue;
                              const std::size_t s = static_cast<std::size_t>(src);
                              for (std::size_t d = 0; d < din; ++d) {
                                  const std::size_t wbase = (j * din + d) * filters;
                                  if (gx) {
                                      T acc = T(0);
                                      for (std::size_t f = 0; f < filters; ++f) acc += grow[f] * W.data[wbase + f];
                                      gx[s * din + d] += acc;
                                  }
                                  if (gw) {
                                      const T xv = X.data[s * din + d];
                                      for (std::size_t f = 0; f < filters; ++f) gw[wbase + f] += xv * grow[f];
                                  }
                              }
                          }
                      }
                      if (B.requires_grad) {
                          auto& gb = B.ensure_grad();
                          for (std::size_t t = 0; t < len; ++t) {
                              for (std::size_t f = 0; f < filters; ++f) gb[f] += gy[t * filters + f];
                          }
                      }
                  });
}

template <typename T>
Tensor<T> Graph<T>::sigmoid(const Tensor<T>& x) {
    std::vector<T> out(x.numel());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = stable_sigmoid(x.data()[i]);
    return record(OpKind::sigmoid, x.shape(), std::move(out), {x}, [](TensorNode<T>& self) {
        auto& g = self.inputs[0]->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) {
            const T y = self.data[i];
            g[i] += self.grad[i] * y * (T(1) - y);
        }
    });
}

template <typename T>
Tensor<T> Graph<T>::tanh(const Tensor<T>& x) {
    std::vector<T> out(x.numel());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(x.data()[i]);
    return record(OpKind::tanh, x.shape(), std::move(out), {x}, [](TensorNode<T>& self) {
        auto& g = self.inputs[0]->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) {
            const T y = self.data[i];
            g[i] += self.grad[i] * (T(1) - y * y);
        }
    });
}

template <typename T>
Tensor<T> Graph<T>::softmax(const Tensor<T>& x, std::size_t axis) {
    const AxisView v = axis_view(OpKind::softmax, x.shape(), axis);
    std::vector<T> out(x.numel());
    softmax_forward<T>(x.data(), {}, v, out);
    return record(OpKind::softmax, x.shape(), std::move(out), {x}, [v](TensorNode<T>& self) {
        softmax_backward<T>(self.data, self.grad, v, self.inputs[0]->ensure_grad());
    });
}

template <typename T>
Tensor<T> Graph<T>::masked_softmax(const Tensor<T>& x, const Tensor<T>& mask, std::size_t axis) {
    if (x.shape() != mask.shape()) shape_mismatch(OpKind::masked_softmax, x.shape(), mask.shape());
    const AxisView v = axis_view(OpKind::masked_softmax, x.shape(), axis);
    std::vector<T> out(x.numel());
    softmax_forward<T>(x.data(), mask.data(), v, out);
    // Only the logits are differentiated; the mask is treated as a constant.
    return record(OpKind::masked_softmax, x.shape(), std::move(out), {x}, [v](TensorNode<T>& self) {
        softmax_backward<T>(self.data, self.grad, v, self.inputs[0]->ensure_grad());
    });
}

template <typename T>
Tensor<T> Graph<T>::dropout(const Tensor<T>& x, double rate) {
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw std::invalid_argument("dropout: rate must lie in [0,1), got " + std::to_string(rate));
    }
    if (mode_ == Mode::eval || rate == 0.0) return x;
    const T keep_scale = static_cast<T>(1.0 / (1.0 - rate));
    std::vector<T> mask(x.numel());
    for (auto& m : mask) m = dropout_rng_.uniform01() >= rate ? keep_scale : T(0);
    std::vector<T> out(x.numel());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.data()[i] * mask[i];
    return record(OpKind::dropout, x.shape(), std::move(out), {x}, [mask = std::move(mask)](TensorNode<T>& self) {
        auto& g = self.inputs[0]->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * mask[i];
    });
}

template <typename T>
Tensor<T> Graph<T>::mse(const Tensor<T>& prediction, const Tensor<T>& target) {
    if (prediction.shape() != target.shape()) shape_mismatch(OpKind::mse, prediction.shape(), target.shape());
    const std::size_t n = prediction.numel();
    T acc = T(0);
    for (std::size_t i = 0; i < n; ++i) {
        const T d = prediction.data()[i] - target.data()[i];
        acc += d * d;
    }
    return record(OpKind::mse, {}, {acc / static_cast<T>(n)}, {prediction, target}, [n](TensorNode<T>& self) {
        auto& P = *self.inputs[0];
        auto& Y = *self.inputs[1];
        const T coeff = self.grad[0] * T(2) / static_cast<T>(n);
        if (P.requires_grad) {
            auto& g = P.ensure_grad();
            for (std::size_t i = 0; i < n; ++i) g[i] += coeff * (P.data[i] - Y.data[i]);
        }
        if (Y.requires_grad) {
            auto& g = Y.ensure_grad();
            for (std::size_t i = 0; i < n; ++i) g[i] -= coeff * (P.data[i] - Y.data[i]);
        }
    });
}

template <typename T>
Tensor<T> Graph<T>::masked_sse(const Tensor<T>& prediction, const Tensor<T>& target, const Tensor<T>& mask) {
    if (prediction.shape() != target.shape()) {
        shape_mismatch(OpKind::masked_sse, prediction.shape(), target.shape());
    }
    if (prediction.shape() != mask.shape()) shape_mismatch(OpKind::masked_sse, prediction.shape(), mask.shape());
    const std::size_t n = prediction.numel();
    T acc = T(0);
    for (std::size_t i = 0; i < n; ++i) {
        const T d = prediction.data()[i] - target.data()[i];
        acc += mask.data()[i] * d * d;
    }
    std::vector<T> weights(mask.data().begin(), mask.data().end());
    return record(OpKind::masked_sse, {}, {acc}, {prediction, target},
                  [n, weights = std::move(weights)](TensorNode<T>& self) {
                      auto& P = *self.inputs[0];
                      auto& Y = *self.inputs[1];
                      const T coeff = self.grad[0] * T(2);
                      if (P.requires_grad) {
                          auto& g = P.ensure_grad();
                          for (std::size_t i = 0; i < n; ++i) g[i] += coeff * weights[i] * (P.data[i] - Y.data[i]);
                      }
                      if (Y.requires_grad) {
                          auto& g = Y.ensure_grad();
                          for (std::size_t i = 0; i < n; ++i) g[i] -= coeff * weights[i] * (P.data[i] - Y.data[i]);
                      }
                  });
}

template <typename T>
Tensor<T> Graph<T>::gather(const Tensor<T>& table, std::span<const std::size_t> rows) {
    if (table.rank() != 2) bad_shape(OpKind::gather, table.shape(), "table must be rank 2");
    if (rows.empty()) bad_shape(OpKind::gather, table.shape(), "no rows requested");
    const std::size_t vocab = table.dim(0), width = table.dim(1);
    std::vector<std::size_t> ids(rows.begin(), rows.end());
    std::vector<T> out(ids.size() * width);
    for (std::size_t r = 0; r < ids.size(); ++r) {
        if (ids[r] >= vocab) {
            throw std::out_of_range("gather: row " + std::to_string(ids[r]) + " outside table of shape " +
                                    shape_to_string(table.shape()));
        }
        std::copy_n(table.data().begin() + static_cast<std::ptrdiff_t>(ids[r] * width), width,
                    out.begin() + static_cast<std::ptrdiff_t>(r * width));
    }
    const std::size_t n = ids.size();
    return record(OpKind::gather, {n, width}, std::move(out), {table},
                  [ids = std::move(ids), width](TensorNode<T>& self) {
                      auto& g = self.inputs[0]->ensure_grad();
                      for (std::size_t r = 0; r < ids.size(); ++r) {
                          for (std::size_t c = 0; c < width; ++c) g[ids[r] * width + c] += self.grad[r * width + c];
                      }
                  });
}

template <typename T>
Tensor<T> Graph<T>::sum(const Tensor<T>& x) {
    T acc = T(0);
    for (T v : x.data()) acc += v;
    return record(OpKind::sum, {}, {acc}, {x}, [](TensorNode<T>& self) {
        auto& g = self.inputs[0]->ensure_grad();
        for (auto& v : g) v += self.grad[0];
    });
}

template <typename T>
Tensor<T> Graph<T>::transpose(const Tensor<T>& x) {
    if (x.rank() != 2) bad_shape(OpKind::transpose, x.shape(), "expected rank 2");
    const std::size_t rows = x.dim(0), cols = x.dim(1);
    std::vector<T> out(x.numel());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) out[c * rows + r] = x.data()[r * cols + c];
    }
    return record(OpKind::transpose, {cols, rows}, std::move(out), {x}, [rows, cols](TensorNode<T>& self) {
        auto& g = self.inputs[0]->ensure_grad();
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) g[r * cols + c] += self.grad[c * rows + r];
        }
    });
}

template <typename T>
Tensor<T> Graph<T>::slice(const Tensor<T>& x, std::size_t axis, std::size_t begin, std::size_t end) {
    const AxisView v = axis_view(OpKind::slice, x.shape(), axis);
    if (begin >= end || end > v.n) {
        bad_shape(OpKind::slice, x.shape(),
                  "range [" + std::to_string(begin) + "," + std::to_string(end) + ") invalid on axis " + std::to_string(axis));
    }
    Shape out_shape = x.shape();
    out_shape[axis] = end - begin;
    const std::size_t width = end - begin;
    std::vector<T> out(element_count(out_shape));
    std::size_t w = 0;
    for (std::size_t o = 0; o < v.outer; ++o) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < v.inner; ++j) out[w++] = x.data()[(o * v.n + i) * v.inner + j];
        }
    }
    return record(OpKind::slice, out_shape, std::move(out), {x}, [v, begin, width](TensorNode<T>& self) {
        auto& g = self.inputs[0]->ensure_grad();
        std::size_t r = 0;
        for (std::size_t o = 0; o < v.outer; ++o) {
            for (std::size_t i = begin; i < begin + width; ++i) {
                for (std::size_t j = 0; j < v.inner; ++j) g[(o * v.n + i) * v.inner + j] += self.grad[r++];
            }
        }
    });
}

template <typename T>
Tensor<T> Graph<T>::scale(const Tensor<T>& x, double factor) {
    const T f = static_cast<T>(factor);
    std::vector<T> out(x.numel());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f * x.data()[i];
    return record(OpKind::scale, x.shape(), std::move(out), {x}, [f](TensorNode<T>& self) {
        auto& g = self.inputs[0]->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += f * self.grad[i];
    });
}

template <typename T>
void Graph<T>::backward(const Tensor<T>& loss) {
    if (!loss.defined()) throw std::invalid_argument("backward: undefined loss tensor");
    if (!loss.is_scalar()) {
        throw ShapeError("backward: loss must be a scalar, got shape " + shape_to_string(loss.shape()));
    }
    if (loss.node().graph != this) throw std::invalid_argument("backward: loss was not produced by this graph");

    // A large leaf (the embedding table) can feed hundreds of nodes; reset it once.
    std::unordered_set<const TensorNode<T>*> reset;
    for (const auto& node : tape_) {
        node->grad.clear();
        for (const auto& in : node->inputs) {
            if (in->op == OpKind::leaf && in->requires_grad && reset.insert(in.get()).second) {
                in->grad.assign(in->data.size(), T(0));
            }
        }
    }
    if (!loss.requires_grad()) return;

    loss.node().grad.assign(1, T(1));
    for (auto it = tape_.rbegin(); it != tape_.rend(); ++it) {
        TensorNode<T>& node = **it;
        // Nodes that received no contribution are skipped entirely.
        if (node.grad.empty() || !node.backward) continue;
        node.backward(node);
    }
}

template class Graph<float>;
template class Graph<double>;

}  // namespace gazeaes::numerics
