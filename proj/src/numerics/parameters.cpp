#include "gazeaes/numerics/parameters.hpp"

#include <cmath>
#include <stdexcept>

#include "gazeaes/numerics/random.hpp"

namespace gazeaes::numerics {

template <typename T>
Tensor<T>& ParameterSet<T>::create(const std::string& name, Shape shape, Init init) {
    std::vector<T> values(element_count(shape), T(0));
    if (init == Init::small_uniform) {
        Rng rng(derive_seed(seed_, name));
        for (auto& v : values) v = static_cast<T>(rng.uniform(-kInitRange, kInitRange));
    }
    return adopt(name, Tensor<T>::from(std::move(shape), std::move(values), true));
}

template <typename T>
Tensor<T>& ParameterSet<T>::adopt(const std::string& name, Tensor<T> tensor) {
    if (index_.count(name)) throw std::invalid_argument("parameter '" + name + "' already exists");
    tensor.set_requires_grad(true);
    index_[name] = entries_.size();
    names_.push_back(name);
    entries_.push_back(std::move(tensor));
    return entries_.back();
}

template <typename T>
Tensor<T>& ParameterSet<T>::get(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("no parameter named '" + name + "'");
    return entries_[it->second];
}

template <typename T>
const Tensor<T>& ParameterSet<T>::get(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("no parameter named '" + name + "'");
    return entries_[it->second];
}

template <typename T>
std::size_t ParameterSet<T>::total_elements() const {
    std::size_t n = 0;
    for (const auto& t : entries_) n += t.numel();
    return n;
}

template <typename T>
void ParameterSet<T>::zero_grad() {
    for (auto& t : entries_) t.zero_grad();
}

template <typename T>
double ParameterSet<T>::grad_norm() const {
    double acc = 0.0;
    for (const auto& t : entries_) {
        if (!t.has_grad()) continue;
        for (T g : t.node().grad) acc += static_cast<double>(g) * static_cast<double>(g);
    }
    return std::sqrt(acc);
}

template <typename T>
double ParameterSet<T>::clip_grad_norm(double max_norm) {
    const double norm = grad_norm();
    if (norm > max_norm && norm > 0.0) {
        const T factor = static_cast<T>(max_norm / norm);
        for (auto& t : entries_) {
            if (!t.has_grad()) continue;
            for (auto& g : t.mutable_grad()) g *= factor;
        }
    }
    return norm;
}

template <typename T>
std::map<std::string, double> ParameterSet<T>::value_norms() const {
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        double acc = 0.0;
        for (T v : entries_[i].data()) acc += static_cast<double>(v) * static_cast<double>(v);
        out[names_[i]] = std::sqrt(acc);
    }
    return out;
}

template <typename T>
std::map<std::string, std::vector<T>> ParameterSet<T>::snapshot() const {
    std::map<std::string, std::vector<T>> out;
    for (std::size_t i = 0; i < entries_.size(); ++i) out[names_[i]] = entries_[i].to_vector();
    return out;
}

template <typename T>
void ParameterSet<T>::restore(const std::map<std::string, std::vector<T>>& values) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        auto it = values.find(names_[i]);
        if (it == values.end()) throw std::invalid_argument("restore: missing parameter '" + names_[i] + "'");
        if (it->second.size() != entries_[i].numel()) {
            throw std::invalid_argument("restore: size mismatch for parameter '" + names_[i] + "'");
        }
        std::copy(it->second.begin(), it->second.end(), entries_[i].mutable_data().begin());
    }
}

template class ParameterSet<float>;
template class ParameterSet<double>;

}  // namespace gazeaes::numerics
