#pragma once

#include <cstddef>
#include <span>

namespace gazeaes::metrics {

/// I_x(a, b) by the continued fraction with modified Lentz iteration.
double regularized_incomplete_beta(double a, double b, double x);

/// Student's t cumulative distribution with `df` degrees of freedom.
double student_t_cdf(double t, double df);

struct SignificanceResult {
    double t_statistic = 0.0;
    double p_value = 1.0;  // two-tailed
    std::size_t n_pairs = 0;
    double mean_difference = 0.0;

    bool significant(double alpha = 0.05) const { return p_value < alpha; }
};

/// Paired t-test on a[i] - b[i]. Throws std::invalid_argument for unequal
/// lengths, fewer than two pairs, or differences with zero variance.
SignificanceResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace gazeaes::metrics
