#pragma once

// Writes the experiment fixture to disk in the raw input formats: an
// ASAP-style essay TSV, set metadata with articles, reader metadata and a
// gaze CSV aligned to the tokenizer's output.

#include <filesystem>
#include <fstream>
#include <string>

#include "experiment_fixture.hpp"
#include "gazeaes/corpus/text.hpp"

namespace gazeaes::test_support {

struct CliDataset {
    std::filesystem::path dir;
    std::filesystem::path essays, metadata, readers, gaze, config;
    std::size_t gaze_rows = 0;
};

inline std::string essay_text(const corpus::Essay& e) {
    std::string text;
    for (const auto& s : e.sentences) {
        for (const auto& tok : s) {
            std::string word = tok;
            for (auto& ch : word) {
                if (ch == '_') ch = 'x';
            }
            text += word + " ";
        }
        text.back() = '.';
        text += ' ';
    }
    return text;
}

inline CliDataset write_cli_dataset(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::remove_all(dir);
    fs::create_directories(dir);
    CliDataset d;
    d.dir = dir;
    d.essays = dir / "essays.tsv";
    d.metadata = dir / "sets.txt";
    d.readers = dir / "readers.csv";
    d.gaze = dir / "gaze.csv";
    d.config = dir / "experiment.txt";

    const auto data = experiment_fixture();
    {
        std::ofstream out(d.essays);
        out << "essay_id\tessay_set\tessay\trater1_domain1\tdomain1_score\n";
        for (const auto& e : data.essays) {
            out << e.essay_id << '\t' << e.set_id << '\t' << essay_text(e) << '\t' << e.raw_score << '\t'
                << e.raw_score << '\n';
        }
    }
    {
        std::ofstream meta(d.metadata);
        for (int s : {3, 4, 5, 6}) {
            const auto name = "article" + std::to_string(s) + ".txt";
            std::ofstream(dir / name) << *data.sets.at(s).source_article;
            meta << "set." << s << ".article = " << name << '\n';
        }
    }
    std::ofstream(d.readers) << "reader_id,native,age\nr_native,1,30\nr_other,0,41\n";
    {
        std::ofstream out(d.gaze);
        out << "essay_id,reader_id,ia_index,token,dwell_time_ms,first_fixation_ms,is_regression,run_count,skip\n";
        std::set<long long> gaze_ids;
        for (const auto& r : data.gaze_records) gaze_ids.insert(r.essay_id);
        for (const auto& e : data.essays) {
            if (!gaze_ids.count(e.essay_id)) continue;
            std::vector<std::string> tokens;
            for (const auto& s : corpus::segment(essay_text(e))) tokens.insert(tokens.end(), s.begin(), s.end());
            for (const std::string reader : {"r_native", "r_other"}) {
                const double scale = reader == "r_native" ? 1.0 : 1.4;
                for (std::size_t k = 0; k < tokens.size(); ++k) {
                    const auto bins = synthetic_bins(tokens[k]);
                    const int skip = bins.bin(gaze::GazeAttribute::skip);
                    double ffd = 0, dt = 0;
                    int rc = 0, ir = 0;
                    if (!skip) {
                        rc = bins.bin(gaze::GazeAttribute::run_count);
                        ffd = scale * (80.0 + 30.0 * bins.bin(gaze::GazeAttribute::first_fixation));
                        dt = ffd + scale * 60.0 * (rc - 1) + scale * 20.0 * bins.bin(gaze::GazeAttribute::dwell_time);
                        ir = bins.bin(gaze::GazeAttribute::is_regression);
                    }
                    out << e.essay_id << ',' << reader << ',' << k << ',' << tokens[k] << ',' << dt << ',' << ffd
                        << ',' << ir << ',' << rc << ',' << skip << '\n';
                    ++d.gaze_rows;
                }
            }
        }
    }
    std::ofstream(d.config) << "# tiny model for tool tests\n"
                               "experiment.system = co_attention_gaze\n"
                               "experiment.seed = 17\n"
                               "experiment.precision = 64\n"
                               "model.embedding_dim = 4\n"
                               "model.conv_kernel = 3\n"
                               "model.conv_filters = 3\n"
                               "model.lstm_hidden = 3\n"
                               "model.modeling_hidden = 3\n"
                               "model.vocab_size = 50\n"
                               "train.epochs = 1\n"
                               "train.batch_size = 8\n";
    return d;
}

}  // namespace gazeaes::test_support
