#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gazeaes/corpus/essay.hpp"
#include "gazeaes/corpus/vocabulary.hpp"
#include "gazeaes/gaze/attributes.hpp"
#include "gazeaes/gaze/records.hpp"

namespace gazeaes::gaze {

struct MomentPair {
    double mean = 0.0;
    double sd = 0.0;  // population
};

struct ReaderStats {
    std::string reader_id;
    std::size_t records = 0;
    MomentPair dwell_time;
    MomentPair first_fixation;
};

using ReaderStatsTable = std::map<std::string, ReaderStats>;

/// Population mean and standard deviation of DT and FFD per reader, over all
/// of that reader's records. Readers listed in `expected` without records are
/// omitted and reported in `warnings`.
ReaderStatsTable reader_stats(const std::vector<GazeRecord>& records, const std::set<std::string>& expected = {},
                              std::vector<std::string>* warnings = nullptr);

/// The six-case fixation binning, evaluated exactly as written:
///   0 if FV = 0; 1 if FV <= mu - sd; 2 if <= mu - sd/2; 3 if <= mu + sd/2;
///   4 if <= mu + sd; 5 otherwise.
/// Throws std::invalid_argument for FV < 0 or sd < 0.
/// reader_stats over the records of training essays only. Throws
/// LeakageError unless `training` is a training partition.
ReaderStatsTable training_reader_stats(const std::vector<GazeRecord>& records, const corpus::TaggedEssays& training,
                                       std::vector<std::string>* warnings = nullptr);

int bin_fixation(double value, double mean, double sd);

/// min(RC, 5). Throws for negative counts.
int bin_run_count(int run_count);

/// Bins of a single record given its reader's statistics.
TokenBins bin_record(const GazeRecord& record, const ReaderStats& stats);

struct BinningResult {
    /// Keyed by (essay_id, reader_id); one entry per token of the essay.
    std::map<std::pair<long long, std::string>, BinnedGaze> binned;
    std::size_t rejected_records = 0;
    std::vector<std::string> diagnostics;
};

/// Aligns records to the tokenized essays. Records naming an unknown essay,
/// a reader without statistics, or an ia_index past the essay's last token
/// are rejected with a diagnostic. Tokens a reader has no record for stay
/// absent.
BinningResult bin_all(const std::vector<GazeRecord>& records, const ReaderStatsTable& stats,
                      const std::vector<corpus::Essay>& essays);

/// Copies binned sequences onto their essays' gaze maps (replacing any
/// earlier binning). Returns how many essays received at least one reader.
std::size_t attach_gaze(std::vector<corpus::Essay>& essays, const BinningResult& result);

}  // namespace gazeaes::gaze
