#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace gazeaes::gaze {

/// One interest area (token) as read by one reader.
struct GazeRecord {
    long long essay_id = 0;
    std::string reader_id;
    std::size_t ia_index = 0;
    std::string token;
    double dwell_time = 0.0;      // ms
    double first_fixation = 0.0;  // ms
    int is_regression = 0;
    int run_count = 0;
    int skip = 0;

    /// Empty when the record is consistent, otherwise the first violated rule.
    std::string violation() const;
};

struct GazeLoadResult {
    std::vector<GazeRecord> records;
    std::size_t rejected_rows = 0;
    std::vector<std::string> diagnostics;
};

/// Comma-separated with a header naming essay_id, reader_id, ia_index, token,
/// dwell_time_ms, first_fixation_ms, is_regression, run_count, skip (any
/// order). Rows that fail to parse or break the record invariants are
/// rejected with a diagnostic.
GazeLoadResult load_gaze_csv(std::istream& in, const std::string& source = "<stream>");
GazeLoadResult load_gaze_csv(const std::filesystem::path& path);

void write_gaze_csv(std::ostream& out, const std::vector<GazeRecord>& records);

struct ReaderInfo {
    std::string reader_id;
    bool native = false;
    std::map<std::string, std::string> attributes;  // remaining columns
};

using ReaderTable = std::map<std::string, ReaderInfo>;

/// Comma-separated with a header containing reader_id and native (0/1,
/// yes/no, true/false). Other columns are kept as free-form attributes.
ReaderTable load_reader_metadata(std::istream& in, const std::string& source = "<stream>");
ReaderTable load_reader_metadata(const std::filesystem::path& path);

struct ReaderFilter {
    enum class Kind { all, native_only, explicit_list };
    Kind kind = Kind::all;
    std::set<std::string> readers;

    /// "all", "native_only", or a comma-separated reader id list.
    static ReaderFilter parse(const std::string& text);
    std::string to_string() const;
    /// native_only needs metadata; an unknown reader is treated as non-native.
    bool accepts(const std::string& reader_id, const ReaderTable& readers) const;
};

std::vector<GazeRecord> filter_readers(const std::vector<GazeRecord>& records, const ReaderFilter& filter,
                                       const ReaderTable& readers);

}  // namespace gazeaes::gaze
