#include "gazeaes/metrics/significance.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gazeaes::metrics {
namespace {

// Continued fraction for I_x(a,b), valid for x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete beta: x outside [0,1]");
    if (x == 0.0 || x == 1.0) return x;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("t distribution: df must be positive");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
    return t >= 0.0 ? 1.0 - tail : tail;
}

SignificanceResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("paired t-test: series lengths differ (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    const std::size_t n = a.size();
    if (n < 2) throw std::invalid_argument("paired t-test: need at least two pairs");
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    const double variance = ss / static_cast<double>(n - 1);
    if (!(variance > 0.0)) throw std::invalid_argument("paired t-test: differences have zero variance");
    SignificanceResult r;
    r.n_pairs = n;
    r.mean_difference = mean;
    r.t_statistic = mean / std::sqrt(variance / static_cast<double>(n));
    const double df = static_cast<double>(n - 1);
    const double t2 = r.t_statistic * r.t_statistic;
    r.p_value = regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t2));
    return r;
}

}  // namespace gazeaes::metrics
