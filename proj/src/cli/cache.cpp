#include "gazeaes/cli/cache.hpp"

#include <fstream>
#include <sstream>

#include "gazeaes/corpus/loader.hpp"
#include "gazeaes/util/csv.hpp"
#include "gazeaes/util/strings.hpp"

namespace gazeaes::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CacheError("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path, const std::string& what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("missing " + what + ": " + path.string());
    return in;
}

}  // namespace

void write_essays_tsv(std::ostream& out, const std::vector<corpus::Essay>& essays) {
    for (const auto& e : essays) {
        out << e.essay_id << '\t' << e.set_id << '\t' << e.raw_score << '\t' << (e.degenerate ? 1 : 0);
        for (const auto& s : e.sentences) out << '\t' << util::join(s, " ");
        out << '\n';
    }
}

std::vector<corpus::Essay> read_essays_tsv(std::istream& in, const corpus::SetTable& sets,
                                           const std::string& source) {
    std::vector<corpus::Essay> essays;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = util::split(line, '\t');
        const auto where = source + ":" + std::to_string(line_no);
        if (fields.size() < 5) throw CacheError(where + ": expected at least 5 fields");
        const auto id = util::parse_int(fields[0]);
        const auto set_id = util::parse_int(fields[1]);
        const auto raw = util::parse_int(fields[2]);
        if (!id || !set_id || !raw || (fields[3] != "0" && fields[3] != "1")) {
            throw CacheError(where + ": malformed essay header");
        }
        corpus::Essay e;
        e.essay_id = *id;
        e.set_id = static_cast<int>(*set_id);
        e.raw_score = static_cast<int>(*raw);
        e.degenerate = fields[3] == "1";
        try {
            e.normalized_score = corpus::normalize_score(e.raw_score, corpus::lookup_set(sets, e.set_id));
        } catch (const std::exception& ex) {
            throw CacheError(where + ": " + ex.what());
        }
        for (std::size_t i = 4; i < fields.size(); ++i) {
            corpus::Sentence sentence;
            for (auto& tok : util::split(fields[i], ' ')) {
                if (!tok.empty()) sentence.push_back(std::move(tok));
            }
            e.sentences.push_back(std::move(sentence));
        }
        essays.push_back(std::move(e));
    }
    return essays;
}

void write_set_table(const fs::path& dir, const corpus::SetTable& sets) {
    auto out = open_out(dir / "sets.txt");
    for (const auto& [id, set] : sets) {
        const auto prefix = "set." + std::to_string(id) + ".";
        out << prefix << "min = " << set.score_min << '\n';
        out << prefix << "max = " << set.score_max << '\n';
        out << prefix << "source_dependent = " << (set.is_source_dependent ? "true" : "false") << '\n';
        if (set.source_article) {
            const auto name = "article_" + std::to_string(id) + ".txt";
            auto article = open_out(dir / name);
            article << *set.source_article;
            out << prefix << "article = " << name << '\n';
        }
    }
}

void write_corpus_cache(const fs::path& dir, const CorpusCache& cache) {
    fs::create_directories(dir);
    write_set_table(dir, cache.sets);
    auto out = open_out(dir / "corpus.tsv");
    write_essays_tsv(out, cache.essays);
    experiments::save_fold_table(dir / "folds", cache.folds);
}

CorpusCache read_corpus_cache(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw CacheError("corpus cache not found: " + dir.string());
    if (!fs::exists(dir / "sets.txt")) throw CacheError("missing set table: " + (dir / "sets.txt").string());
    CorpusCache cache;
    cache.sets = corpus::load_set_metadata(dir / "sets.txt");
    auto in = open_in(dir / "corpus.tsv", "essay cache");
    cache.essays = read_essays_tsv(in, cache.sets, (dir / "corpus.tsv").string());
    if (!fs::is_directory(dir / "folds")) throw CacheError("missing fold directory: " + (dir / "folds").string());
    cache.folds = experiments::load_fold_table(dir / "folds");
    return cache;
}

void write_readers_csv(std::ostream& out, const gaze::ReaderTable& readers) {
    out << "reader_id,native\n";
    for (const auto& [id, info] : readers) out << util::csv_escape(id) << ',' << (info.native ? 1 : 0) << '\n';
}

void write_reader_stats_tsv(std::ostream& out, const gaze::ReaderStatsTable& stats) {
    out << "reader_id\trecords\tdt_mean\tdt_sd\tffd_mean\tffd_sd\n";
    for (const auto& [id, s] : stats) {
        out << id << '\t' << s.records << '\t' << util::format_double(s.dwell_time.mean) << '\t'
            << util::format_double(s.dwell_time.sd) << '\t' << util::format_double(s.first_fixation.mean) << '\t'
            << util::format_double(s.first_fixation.sd) << '\n';
    }
}

void write_label_file(std::ostream& out, const corpus::Essay& essay, const gaze::BinnedGaze& binned) {
    const auto tokens = essay.flat_tokens();
    out << "index\ttoken";
    for (auto a : gaze::kAllGazeAttributes) out << '\t' << gaze::short_name(a);
    out << '\n';
    for (std::size_t i = 0; i < binned.tokens.size(); ++i) {
        out << i << '\t' << (i < tokens.size() ? tokens[i] : "");
        for (auto a : gaze::kAllGazeAttributes) {
            out << '\t';
            if (binned.tokens[i].present) {
                out << binned.tokens[i].bin(a);
            } else {
                out << '-';
            }
        }
        out << '\n';
    }
}

GazeBundle read_gaze_bundle(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw CacheError("gaze bundle not found: " + dir.string());
    GazeBundle bundle;
    auto loaded = gaze::load_gaze_csv(dir / "records.csv");
    if (loaded.rejected_rows != 0) {
        throw CacheError((dir / "records.csv").string() + ": " + std::to_string(loaded.rejected_rows) +
                         " rows rejected; regenerate the bundle with bin-gaze");
    }
    bundle.records = std::move(loaded.records);
    if (!fs::exists(dir / "readers.csv")) throw CacheError("missing reader table: " + (dir / "readers.csv").string());
    bundle.readers = gaze::load_reader_metadata(dir / "readers.csv");
    return bundle;
}

}  // namespace gazeaes::cli
