#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gazeaes::gaze {

/// The five per-token reading behaviours learnt as auxiliary targets.
enum class GazeAttribute : std::size_t {
    dwell_time = 0,      // DT: total fixation time on the token
    first_fixation = 1,  // FFD: duration of the first fixation
    is_regression = 2,   // IR: a regression was launched from the token
    run_count = 3,       // RC: number of visits
    skip = 4,            // Skip: never fixated
};

inline constexpr std::size_t kGazeAttributeCount = 5;

inline constexpr std::array<GazeAttribute, kGazeAttributeCount> kAllGazeAttributes{
    GazeAttribute::dwell_time, GazeAttribute::first_fixation, GazeAttribute::is_regression,
    GazeAttribute::run_count, GazeAttribute::skip};

constexpr std::size_t index_of(GazeAttribute a) { return static_cast<std::size_t>(a); }

inline std::string_view short_name(GazeAttribute a) {
    constexpr std::array<std::string_view, kGazeAttributeCount> names{"DT", "FFD", "IR", "RC", "Skip"};
    return names[index_of(a)];
}

inline std::string_view long_name(GazeAttribute a) {
    constexpr std::array<std::string_view, kGazeAttributeCount> names{
        "Dwell Time", "First Fixation Duration", "IsRegression", "Run Count", "Skip"};
    return names[index_of(a)];
}

/// Accepts the short names case-insensitively ("dt", "FFD", "skip").
inline GazeAttribute parse_gaze_attribute(std::string_view text) {
    std::string lower(text);
    for (auto& c : lower) c = static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    constexpr std::array<std::string_view, kGazeAttributeCount> names{"dt", "ffd", "ir", "rc", "skip"};
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (lower == names[i]) return kAllGazeAttributes[i];
    }
    throw std::invalid_argument("unknown gaze attribute '" + std::string(text) + "'");
}

/// Highest bin for an attribute: 5 for the six-level ones, 1 for binary.
constexpr int max_bin(GazeAttribute a) {
    return (a == GazeAttribute::is_regression || a == GazeAttribute::skip) ? 1 : 5;
}

/// Bins for one token as seen by one reader.
struct TokenBins {
    bool present = false;  // false when the reader has no record for this token
    std::array<int, kGazeAttributeCount> bins{};

    int bin(GazeAttribute a) const { return bins[index_of(a)]; }
    /// bin / max_bin, the regression target for a sigmoid head.
    double unit_target(GazeAttribute a) const {
        return static_cast<double>(bins[index_of(a)]) / static_cast<double>(max_bin(a));
    }
};

/// One reader's bins for every token of one essay, in flattened token order.
struct BinnedGaze {
    long long essay_id = 0;
    std::string reader_id;
    std::vector<TokenBins> tokens;

    std::size_t present_count() const {
        std::size_t n = 0;
        for (const auto& t : tokens) n += t.present;
        return n;
    }
};

}  // namespace gazeaes::gaze
