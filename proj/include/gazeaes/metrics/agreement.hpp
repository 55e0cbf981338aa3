#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace gazeaes::metrics {

struct RatingPair {
    int predicted = 0;
    int actual = 0;
};

/// Pairs two equal-length rating sequences. Throws on a length mismatch.
std::vector<RatingPair> zip_ratings(std::span<const int> predicted, std::span<const int> actual);

/// Quadratic weighted kappa over the full declared range [min_rating,
/// max_rating]. The expected matrix is the outer product of the two
/// histograms scaled to the observed total. When the expected disagreement
/// is zero (both raters constant at the same value) the result is 1.
/// Throws std::invalid_argument for no pairs, max <= min, or a rating
/// outside the range.
double qwk(std::span<const RatingPair> pairs, int min_rating, int max_rating);

struct AgreementCounts {
    std::size_t correct = 0;  // exact matches
    std::size_t close = 0;    // |pred - actual| <= 1
    std::size_t total = 0;
};

AgreementCounts agreement_counts(std::span<const RatingPair> pairs);

}  // namespace gazeaes::metrics
