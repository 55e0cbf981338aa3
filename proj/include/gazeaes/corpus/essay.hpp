#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gazeaes/gaze/attributes.hpp"

namespace gazeaes::corpus {

using Sentence = std::vector<std::string>;

/// One ASAP prompt: its score range and, for source-dependent prompts, the
/// article the essays respond to.
struct EssaySet {
    int set_id = 0;
    int score_min = 0;
    int score_max = 1;
    std::optional<std::string> source_article;
    bool is_source_dependent = false;

    void validate() const;
};

using SetTable = std::map<int, EssaySet>;

/// Score ranges and source-dependence of the eight ASAP prompts.
SetTable asap_essay_sets();

const EssaySet& lookup_set(const SetTable& sets, int set_id);

struct Essay {
    long long essay_id = 0;
    int set_id = 0;
    std::vector<Sentence> sentences;
    int raw_score = 0;
    double normalized_score = 0.0;
    bool degenerate = false;  // empty text: one empty sentence
    /// Binned gaze per reader id, when the essay was read on the eye tracker.
    std::map<std::string, gaze::BinnedGaze> gaze;

    std::size_t token_count() const;
    std::vector<std::string> flat_tokens() const;
};

class ScoreRangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// (raw - min) / (max - min). Throws ScoreRangeError outside [min,max].
double normalize_score(int raw, const EssaySet& set);

/// round(pred * (max - min) + min), half away from zero, clamped to the
/// range. Throws ScoreRangeError for pred outside [0,1].
int denormalize_score(double prediction, const EssaySet& set);

}  // namespace gazeaes::corpus
