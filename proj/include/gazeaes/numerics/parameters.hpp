#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "gazeaes/numerics/tensor.hpp"

namespace gazeaes::numerics {

/// Initial values for a trainable tensor.
enum class Init {
    zeros,
    small_uniform,  // uniform in [-0.05, 0.05]
};

inline constexpr double kInitRange = 0.05;

/// Ordered collection of named trainable leaves. Each parameter draws its
/// initial values from a stream derived from (seed, name), so adding or
/// removing one parameter never changes the others.
template <typename T>
class ParameterSet {
public:
    explicit ParameterSet(std::uint64_t seed = 0) : seed_(seed) {}

    Tensor<T>& create(const std::string& name, Shape shape, Init init);
    /// Registers an existing tensor (marked requires_grad).
    Tensor<T>& adopt(const std::string& name, Tensor<T> tensor);

    bool contains(const std::string& name) const { return index_.count(name) != 0; }
    Tensor<T>& get(const std::string& name);
    const Tensor<T>& get(const std::string& name) const;

    std::size_t size() const { return entries_.size(); }
    std::size_t total_elements() const;
    const std::vector<std::string>& names() const { return names_; }

    template <typename Fn>
    void for_each(Fn&& fn) {
        for (std::size_t i = 0; i < entries_.size(); ++i) fn(names_[i], entries_[i]);
    }
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = 0; i < entries_.size(); ++i) fn(names_[i], entries_[i]);
    }

    void zero_grad();
    double grad_norm() const;
    /// Rescales all gradients so their global L2 norm is at most max_norm.
    /// Returns the norm before clipping.
    double clip_grad_norm(double max_norm);
    /// Per-parameter L2 norms of the values, for diagnostics.
    std::map<std::string, double> value_norms() const;

    /// Deep copy of all values, keyed by name.
    std::map<std::string, std::vector<T>> snapshot() const;
    /// Overwrites values from a snapshot. Every parameter must be present
    /// with a matching element count.
    void restore(const std::map<std::string, std::vector<T>>& values);

private:
    std::uint64_t seed_;
    std::vector<std::string> names_;
    std::deque<Tensor<T>> entries_;  // stable references across create()
    std::map<std::string, std::size_t> index_;
};

extern template class ParameterSet<float>;
extern template class ParameterSet<double>;

}  // namespace gazeaes::numerics
