#pragma once

// On-disk layouts shared by the commands.
//
// Corpus cache (written by preprocess):
//   corpus.tsv        essay_id, set_id, raw_score, degenerate, then one
//                     field per sentence with space-separated tokens
//   sets.txt          set metadata; articles in article_<id>.txt
//   folds/            fold_set<id>.csv
//   vocab/            set<S>_fold<K>.txt, training-partition vocabularies
//   coverage.tsv      vocabulary size and embedding coverage per fold
//   summary.txt       essays per set, rejected and malformed rows
//
// Gaze bundle (written by bin-gaze):
//   records.csv       aligned, reader-filtered raw records
//   readers.csv       reader metadata
//   reader_stats.tsv  per-reader DT/FFD mean and sd
//   labels/           <essay>_<reader>.tsv binned labels
//   alignment_errors.txt

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "gazeaes/corpus/essay.hpp"
#include "gazeaes/experiments/folds.hpp"
#include "gazeaes/gaze/binning.hpp"
#include "gazeaes/gaze/records.hpp"

namespace gazeaes::cli {

class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CorpusCache {
    corpus::SetTable sets;
    std::vector<corpus::Essay> essays;
    experiments::FoldTable folds;
};

void write_essays_tsv(std::ostream& out, const std::vector<corpus::Essay>& essays);
std::vector<corpus::Essay> read_essays_tsv(std::istream& in, const corpus::SetTable& sets,
                                           const std::string& source = "<stream>");

/// sets.txt plus article files.
void write_set_table(const std::filesystem::path& dir, const corpus::SetTable& sets);

void write_corpus_cache(const std::filesystem::path& dir, const CorpusCache& cache);
/// Reads corpus.tsv, sets.txt and folds/. Throws CacheError naming the
/// missing piece.
CorpusCache read_corpus_cache(const std::filesystem::path& dir);

struct GazeBundle {
    std::vector<gaze::GazeRecord> records;
    gaze::ReaderTable readers;
};

void write_readers_csv(std::ostream& out, const gaze::ReaderTable& readers);
void write_reader_stats_tsv(std::ostream& out, const gaze::ReaderStatsTable& stats);
/// index, token, then DT FFD IR RC Skip bins; "-" where the reader has no record.
void write_label_file(std::ostream& out, const corpus::Essay& essay, const gaze::BinnedGaze& binned);

GazeBundle read_gaze_bundle(const std::filesystem::path& dir);

}  // namespace gazeaes::cli
