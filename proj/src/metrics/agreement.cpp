#include "gazeaes/metrics/agreement.hpp"

#include <cstdlib>
#include <string>

namespace gazeaes::metrics {

std::vector<RatingPair> zip_ratings(std::span<const int> predicted, std::span<const int> actual) {
    if (predicted.size() != actual.size()) {
        throw std::invalid_argument("rating sequences differ in length: " + std::to_string(predicted.size()) +
                                    " vs " + std::to_string(actual.size()));
    }
    std::vector<RatingPair> pairs(predicted.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i] = {predicted[i], actual[i]};
    return pairs;
}

double qwk(std::span<const RatingPair> pairs, int min_rating, int max_rating) {
    if (pairs.empty()) throw std::invalid_argument("qwk: no rating pairs");
    if (max_rating <= min_rating) throw std::invalid_argument("qwk: max rating must exceed min rating");
    const auto n = static_cast<std::size_t>(max_rating - min_rating + 1);
    std::vector<double> observed(n * n, 0.0), hist_pred(n, 0.0), hist_actual(n, 0.0);
    for (const auto& p : pairs) {
        if (p.predicted < min_rating || p.predicted > max_rating || p.actual < min_rating || p.actual > max_rating) {
            throw std::invalid_argument("qwk: rating pair (" + std::to_string(p.predicted) + "," +
                                        std::to_string(p.actual) + ") outside " + std::to_string(min_rating) + "-" +
                                        std::to_string(max_rating));
        }
        const auto i = static_cast<std::size_t>(p.predicted - min_rating);
        const auto j = static_cast<std::size_t>(p.actual - min_rating);
        observed[i * n + j] += 1.0;
        hist_pred[i] += 1.0;
        hist_actual[j] += 1.0;
    }
    const double total = static_cast<double>(pairs.size());
    const double scale = static_cast<double>((n - 1) * (n - 1));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = static_cast<double>(i) - static_cast<double>(j);
            const double w = d * d / scale;
            num += w * observed[i * n + j];
            den += w * hist_pred[i] * hist_actual[j] / total;
        }
    }
    if (den == 0.0) return 1.0;
    return 1.0 - num / den;
}

AgreementCounts agreement_counts(std::span<const RatingPair> pairs) {
    AgreementCounts c;
    c.total = pairs.size();
    for (const auto& p : pairs) {
        const int gap = std::abs(p.predicted - p.actual);
        c.correct += gap == 0;
        c.close += gap <= 1;
    }
    return c;
}

}  // namespace gazeaes::metrics
