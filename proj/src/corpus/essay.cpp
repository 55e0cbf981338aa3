#include "gazeaes/corpus/essay.hpp"

#include <algorithm>
#include <cmath>

namespace gazeaes::corpus {

void EssaySet::validate() const {
    if (score_min >= score_max) {
        throw std::invalid_argument("essay set " + std::to_string(set_id) + ": score_min " + std::to_string(score_min) +
                                    " must be below score_max " + std::to_string(score_max));
    }
}

SetTable asap_essay_sets() {
    SetTable sets;
    auto add = [&](int id, int lo, int hi, bool source_dependent) {
        sets[id] = EssaySet{id, lo, hi, std::nullopt, source_dependent};
    };
    add(1, 2, 12, false);
    add(2, 1, 6, false);
    add(3, 0, 3, true);
    add(4, 0, 3, true);
    add(5, 0, 4, true);
    add(6, 0, 4, true);
    add(7, 0, 30, false);
    add(8, 0, 60, false);
    return sets;
}

const EssaySet& lookup_set(const SetTable& sets, int set_id) {
    auto it = sets.find(set_id);
    if (it == sets.end()) throw std::out_of_range("unknown essay set " + std::to_string(set_id));
    return it->second;
}

std::size_t Essay::token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
}

std::vector<std::string> Essay::flat_tokens() const {
    std::vector<std::string> out;
    out.reserve(token_count());
    for (const auto& s : sentences) out.insert(out.end(), s.begin(), s.end());
    return out;
}

double normalize_score(int raw, const EssaySet& set) {
    if (raw < set.score_min || raw > set.score_max) {
        throw ScoreRangeError("score " + std::to_string(raw) + " outside range " + std::to_string(set.score_min) + "-" +
                              std::to_string(set.score_max) + " of set " + std::to_string(set.set_id));
    }
    return static_cast<double>(raw - set.score_min) / static_cast<double>(set.score_max - set.score_min);
}

int denormalize_score(double prediction, const EssaySet& set) {
    if (!(prediction >= 0.0 && prediction <= 1.0)) {
        throw ScoreRangeError("prediction " + std::to_string(prediction) + " outside [0,1]");
    }
    const double scaled = prediction * static_cast<double>(set.score_max - set.score_min) + set.score_min;
    const int rounded = static_cast<int>(std::round(scaled));
    return std::clamp(rounded, set.score_min, set.score_max);
}

}  // namespace gazeaes::corpus
