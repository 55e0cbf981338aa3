#include "gazeaes/gaze/binning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gazeaes::gaze {
namespace {

MomentPair moments(const std::vector<double>& values) {
    MomentPair m;
    if (values.empty()) return m;
    double sum = 0.0;
    for (double v : values) sum += v;
    m.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(values.size()));
    return m;
}

}  // namespace

ReaderStatsTable reader_stats(const std::vector<GazeRecord>& records, const std::set<std::string>& expected,
                              std::vector<std::string>* warnings) {
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> values;
    for (const auto& r : records) {
        auto& [dt, ffd] = values[r.reader_id];
        dt.push_back(r.dwell_time);
        ffd.push_back(r.first_fixation);
    }
    ReaderStatsTable table;
    for (const auto& [reader, v] : values) {
        ReaderStats s;
        s.reader_id = reader;
        s.records = v.first.size();
        s.dwell_time = moments(v.first);
        s.first_fixation = moments(v.second);
        table.emplace(reader, s);
    }
    for (const auto& reader : expected) {
        if (!table.count(reader) && warnings) warnings->push_back("reader " + reader + " has no records; omitted");
    }
    return table;
}

ReaderStatsTable training_reader_stats(const std::vector<GazeRecord>& records, const corpus::TaggedEssays& training,
                                       std::vector<std::string>* warnings) {
    training.require_training("reader statistics");
    std::set<long long> ids;
    for (const auto* e : training.essays) ids.insert(e->essay_id);
    std::vector<GazeRecord> kept;
    for (const auto& r : records) {
        if (ids.count(r.essay_id)) kept.push_back(r);
    }
    return reader_stats(kept, {}, warnings);
}

int bin_fixation(double value, double mean, double sd) {
    if (!(value >= 0.0)) throw std::invalid_argument("fixation value must be non-negative");
    if (!(sd >= 0.0)) throw std::invalid_argument("standard deviation must be non-negative");
    if (value == 0.0) return 0;
    if (value <= mean - sd) return 1;
    if (value <= mean - 0.5 * sd) return 2;
    if (value <= mean + 0.5 * sd) return 3;
    if (value <= mean + sd) return 4;
    return 5;
}

int bin_run_count(int run_count) {
    if (run_count < 0) throw std::invalid_argument("run count must be non-negative");
    return std::min(run_count, 5);
}

TokenBins bin_record(const GazeRecord& record, const ReaderStats& stats) {
    TokenBins t;
    t.present = true;
    t.bins[index_of(GazeAttribute::dwell_time)] =
        bin_fixation(record.dwell_time, stats.dwell_time.mean, stats.dwell_time.sd);
    t.bins[index_of(GazeAttribute::first_fixation)] =
        bin_fixation(record.first_fixation, stats.first_fixation.mean, stats.first_fixation.sd);
    t.bins[index_of(GazeAttribute::is_regression)] = record.is_regression != 0 ? 1 : 0;
    t.bins[index_of(GazeAttribute::run_count)] = bin_run_count(record.run_count);
    t.bins[index_of(GazeAttribute::skip)] = record.skip != 0 ? 1 : 0;
    return t;
}

BinningResult bin_all(const std::vector<GazeRecord>& records, const ReaderStatsTable& stats,
                      const std::vector<corpus::Essay>& essays) {
    std::map<long long, const corpus::Essay*> by_id;
    for (const auto& e : essays) by_id.emplace(e.essay_id, &e);

    BinningResult result;
    auto reject = [&](const GazeRecord& r, const std::string& why) {
        ++result.rejected_records;
        result.diagnostics.push_back("essay " + std::to_string(r.essay_id) + " reader " + r.reader_id + " ia " +
                                     std::to_string(r.ia_index) + ": " + why);
    };
    for (const auto& r : records) {
        auto essay = by_id.find(r.essay_id);
        if (essay == by_id.end()) {
            reject(r, "essay not in corpus");
            continue;
        }
        auto reader = stats.find(r.reader_id);
        if (reader == stats.end()) {
            reject(r, "reader has no statistics");
            continue;
        }
        const std::size_t n = essay->second->token_count();
        if (r.ia_index >= n) {
            reject(r, "ia_index out of range (essay has " + std::to_string(n) + " tokens)");
            continue;
        }
        auto [it, inserted] = result.binned.try_emplace({r.essay_id, r.reader_id});
        if (inserted) {
            it->second.essay_id = r.essay_id;
            it->second.reader_id = r.reader_id;
            it->second.tokens.resize(n);
        }
        it->second.tokens[r.ia_index] = bin_record(r, reader->second);
    }
    return result;
}

std::size_t attach_gaze(std::vector<corpus::Essay>& essays, const BinningResult& result) {
    std::size_t touched = 0;
    for (auto& e : essays) {
        e.gaze.clear();
        auto it = result.binned.lower_bound({e.essay_id, std::string()});
        for (; it != result.binned.end() && it->first.first == e.essay_id; ++it) {
            e.gaze[it->first.second] = it->second;
        }
        touched += !e.gaze.empty();
    }
    return touched;
}

}  // namespace gazeaes::gaze
