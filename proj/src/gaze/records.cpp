#include "gazeaes/gaze/records.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "gazeaes/util/csv.hpp"
#include "gazeaes/util/strings.hpp"

namespace gazeaes::gaze {
namespace {

constexpr std::array<const char*, 9> kGazeColumns = {"essay_id",      "reader_id",         "ia_index",
                                                     "token",         "dwell_time_ms",     "first_fixation_ms",
                                                     "is_regression", "run_count",         "skip"};

std::optional<bool> parse_flag(std::string_view text) {
    const auto v = util::to_lower(util::trim(text));
    if (v == "1" || v == "true" || v == "yes" || v == "y") return true;
    if (v == "0" || v == "false" || v == "no" || v == "n" || v.empty()) return false;
    return std::nullopt;
}

}  // namespace

std::string GazeRecord::violation() const {
    if (!std::isfinite(dwell_time) || !std::isfinite(first_fixation)) return "non-finite duration";
    if (dwell_time < 0.0 || first_fixation < 0.0) return "negative duration";
    if (first_fixation > dwell_time) return "first fixation exceeds dwell time";
    if (run_count < 0) return "negative run count";
    if ((is_regression != 0 && is_regression != 1) || (skip != 0 && skip != 1)) return "binary field not 0/1";
    if (skip == 1 && (dwell_time != 0.0 || first_fixation != 0.0 || run_count != 0)) {
        return "skipped token with fixations";
    }
    if (run_count >= 1 && skip != 0) return "visited token marked skipped";
    return {};
}

GazeLoadResult load_gaze_csv(std::istream& in, const std::string& source) {
    GazeLoadResult result;
    std::string line;
    if (!std::getline(in, line)) return result;
    const auto header = util::csv_header_index(util::split_csv_line(line));
    std::array<std::size_t, kGazeColumns.size()> col{};
    for (std::size_t k = 0; k < kGazeColumns.size(); ++k) {
        auto it = header.find(kGazeColumns[k]);
        if (it == header.end()) throw std::runtime_error(source + ": header lacks column '" + kGazeColumns[k] + "'");
        col[k] = it->second;
    }
    std::size_t needed = 0;
    for (auto c : col) needed = std::max(needed, c + 1);

    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (util::trim(line).empty()) continue;
        auto reject = [&](const std::string& why) {
            ++result.rejected_rows;
            result.diagnostics.push_back(source + ":" + std::to_string(number) + ": " + why);
        };
        std::vector<std::string> f;
        try {
            f = util::split_csv_line(line);
        } catch (const std::invalid_argument& e) {
            reject(e.what());
            continue;
        }
        if (f.size() < needed) {
            reject("expected " + std::to_string(needed) + " fields, found " + std::to_string(f.size()));
            continue;
        }
        const auto essay = util::parse_int(util::trim(f[col[0]]));
        const auto ia = util::parse_int(util::trim(f[col[2]]));
        const auto dt = util::parse_double(util::trim(f[col[4]]));
        const auto ffd = util::parse_double(util::trim(f[col[5]]));
        const auto ir = util::parse_int(util::trim(f[col[6]]));
        const auto rc = util::parse_int(util::trim(f[col[7]]));
        const auto skip = util::parse_int(util::trim(f[col[8]]));
        if (!essay || !ia || !dt || !ffd || !ir || !rc || !skip || *ia < 0) {
            reject("unparseable numeric field");
            continue;
        }
        GazeRecord r;
        r.essay_id = *essay;
        r.reader_id = std::string(util::trim(f[col[1]]));
        r.ia_index = static_cast<std::size_t>(*ia);
        r.token = f[col[3]];
        r.dwell_time = *dt;
        r.first_fixation = *ffd;
        r.is_regression = static_cast<int>(*ir);
        r.run_count = static_cast<int>(*rc);
        r.skip = static_cast<int>(*skip);
        if (r.reader_id.empty()) {
            reject("empty reader_id");
            continue;
        }
        if (auto why = r.violation(); !why.empty()) {
            reject(why);
            continue;
        }
        result.records.push_back(std::move(r));
    }
    return result;
}

GazeLoadResult load_gaze_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open gaze file " + path.string());
    return load_gaze_csv(in, path.string());
}

void write_gaze_csv(std::ostream& out, const std::vector<GazeRecord>& records) {
    out << util::join(kGazeColumns, ",") << '\n';
    for (const auto& r : records) {
        out << r.essay_id << ',' << util::csv_escape(r.reader_id) << ',' << r.ia_index << ','
            << util::csv_escape(r.token) << ',' << util::format_double(r.dwell_time) << ','
            << util::format_double(r.first_fixation) << ',' << r.is_regression << ',' << r.run_count << ','
            << r.skip << '\n';
    }
}

ReaderTable load_reader_metadata(std::istream& in, const std::string& source) {
    ReaderTable table;
    std::string line;
    if (!std::getline(in, line)) return table;
    const auto raw_header = util::split_csv_line(line);
    const auto header = util::csv_header_index(raw_header);
    if (!header.count("reader_id") || !header.count("native")) {
        throw std::runtime_error(source + ": reader metadata needs reader_id and native columns");
    }
    const std::size_t id_col = header.at("reader_id");
    const std::size_t native_col = header.at("native");
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (util::trim(line).empty()) continue;
        const auto f = util::split_csv_line(line);
        if (f.size() != raw_header.size()) {
            throw std::runtime_error(source + ":" + std::to_string(number) + ": expected " +
                                     std::to_string(raw_header.size()) + " fields");
        }
        ReaderInfo info;
        info.reader_id = std::string(util::trim(f[id_col]));
        const auto native = parse_flag(f[native_col]);
        if (!native) throw std::runtime_error(source + ":" + std::to_string(number) + ": bad native flag");
        info.native = *native;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i != id_col && i != native_col) info.attributes[std::string(util::trim(raw_header[i]))] = f[i];
        }
        table[info.reader_id] = std::move(info);
    }
    return table;
}

ReaderTable load_reader_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reader metadata " + path.string());
    return load_reader_metadata(in, path.string());
}

ReaderFilter ReaderFilter::parse(const std::string& text) {
    ReaderFilter filter;
    const auto t = util::trim(text);
    if (t.empty() || t == "all") return filter;
    if (t == "native_only") {
        filter.kind = Kind::native_only;
        return filter;
    }
    filter.kind = Kind::explicit_list;
    for (const auto& id : util::split(t, ',')) {
        const auto trimmed = util::trim(id);
        if (!trimmed.empty()) filter.readers.emplace(trimmed);
    }
    if (filter.readers.empty()) throw std::invalid_argument("reader filter lists no readers");
    return filter;
}

std::string ReaderFilter::to_string() const {
    switch (kind) {
        case Kind::all: return "all";
        case Kind::native_only: return "native_only";
        case Kind::explicit_list: return util::join(readers, ",");
    }
    return "all";
}

bool ReaderFilter::accepts(const std::string& reader_id, const ReaderTable& table) const {
    switch (kind) {
        case Kind::all: return true;
        case Kind::native_only: {
            auto it = table.find(reader_id);
            return it != table.end() && it->second.native;
        }
        case Kind::explicit_list: return readers.count(reader_id) != 0;
    }
    return false;
}

std::vector<GazeRecord> filter_readers(const std::vector<GazeRecord>& records, const ReaderFilter& filter,
                                       const ReaderTable& readers) {
    std::vector<GazeRecord> out;
    for (const auto& r : records) {
        if (filter.accepts(r.reader_id, readers)) out.push_back(r);
    }
    return out;
}

}  // namespace gazeaes::gaze
