#pragma once

// A miniature of the full experiment inputs: all eight prompts, source
// articles for 3-6, and 48 eye-tracked essays (12 from each of sets 3-6)
// read by two readers, one of them native.

#include <algorithm>
#include <cmath>

#include "gazeaes/experiments/experiment.hpp"
#include "synthetic.hpp"

namespace gazeaes::test_support {

inline constexpr std::size_t kGazeEssaysPerSet = 12;

inline experiments::ExperimentData experiment_fixture(std::size_t essays_per_set = 20, std::uint64_t seed = 9) {
    experiments::ExperimentData data;
    for (int s : {3, 4, 5, 6}) {
        data.sets.at(s).source_article = "The article for prompt " + std::to_string(s) +
                                         " describes a journey. It mentions weather, distance and rest.";
    }
    Rng rng(seed);
    long long next_id = 1;
    for (int set_id = 1; set_id <= 8; ++set_id) {
        const auto& set = data.sets.at(set_id);
        for (std::size_t i = 0; i < essays_per_set; ++i) {
            corpus::Essay e;
            e.essay_id = next_id++;
            e.set_id = set_id;
            e.raw_score = set.score_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(set.score_max - set.score_min + 1)));
            e.normalized_score = corpus::normalize_score(e.raw_score, set);
            const int level = std::min(3, static_cast<int>(std::floor(e.normalized_score * 4.0)));
            for (int s = 0; s < 2; ++s) {
                corpus::Sentence sentence;
                for (int w = 0; w < 5; ++w) {
                    sentence.push_back(w % 2 == 0 ? "level" + std::to_string(level) + "_" + std::to_string(rng.below(5))
                                                  : "filler" + std::to_string(rng.below(10)));
                }
                e.sentences.push_back(std::move(sentence));
            }
            data.essays.push_back(std::move(e));
        }
    }

    data.readers["r_native"] = {"r_native", true, {}};
    data.readers["r_other"] = {"r_other", false, {}};
    for (const auto& e : data.essays) {
        if (e.set_id < 3 || e.set_id > 6) continue;
        const auto index_in_set = static_cast<std::size_t>(e.essay_id - 1) % essays_per_set;
        if (index_in_set >= kGazeEssaysPerSet) continue;
        const auto tokens = e.flat_tokens();
        for (const std::string reader : {"r_native", "r_other"}) {
            const double scale = reader == "r_native" ? 1.0 : 1.4;
            for (std::size_t k = 0; k < tokens.size(); ++k) {
                const auto bins = synthetic_bins(tokens[k]);
                gaze::GazeRecord r;
                r.essay_id = e.essay_id;
                r.reader_id = reader;
                r.ia_index = k;
                r.token = tokens[k];
                r.skip = bins.bin(gaze::GazeAttribute::skip);
                if (!r.skip) {
                    r.run_count = bins.bin(gaze::GazeAttribute::run_count);
                    r.first_fixation = scale * (80.0 + 30.0 * bins.bin(gaze::GazeAttribute::first_fixation));
                    r.dwell_time = r.first_fixation + scale * 60.0 * (r.run_count - 1) +
                                   scale * 20.0 * bins.bin(gaze::GazeAttribute::dwell_time);
                    r.is_regression = bins.bin(gaze::GazeAttribute::is_regression);
                }
                data.gaze_records.push_back(r);
            }
        }
    }
    return data;
}

/// Small, fast model and schedule for harness tests.
inline experiments::ExperimentConfig fixture_config(experiments::System system, std::size_t epochs = 1) {
    experiments::ExperimentConfig c;
    c.system = system;
    c.seed = 17;
    c.precision = 64;
    c.model.embedding_dim = 4;
    c.model.conv_kernel = 3;
    c.model.conv_filters = 3;
    c.model.lstm_hidden = 3;
    c.model.modeling_hidden = 3;
    c.model.vocab_size = 50;
    c.train.epochs = epochs;
    c.train.batch_size = 8;
    return c;
}

}  // namespace gazeaes::test_support
