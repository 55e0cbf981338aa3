#include "gazeaes/corpus/loader.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "gazeaes/util/kv_file.hpp"
#include "gazeaes/util/strings.hpp"

namespace gazeaes::corpus {
namespace {

std::string unquote(std::string_view field) {
    field = util::trim(field);
    if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
        std::string out;
        for (std::size_t i = 1; i + 1 < field.size(); ++i) {
            out.push_back(field[i]);
            if (field[i] == '"' && field[i + 1] == '"' && i + 2 < field.size()) ++i;
        }
        return out;
    }
    return std::string(field);
}

// Column positions of essay_id, essay_set, essay, domain1_score.
using Columns = std::array<std::size_t, 4>;

Columns locate_columns(const std::vector<std::string>& header, const std::string& source) {
    static const std::array<const char*, 4> names = {"essay_id", "essay_set", "essay", "domain1_score"};
    Columns cols{};
    for (std::size_t k = 0; k < names.size(); ++k) {
        bool found = false;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (util::to_lower(util::trim(header[i])) == names[k]) {
                cols[k] = i;
                found = true;
                break;
            }
        }
        if (!found) throw std::runtime_error(source + ": header lacks column '" + names[k] + "'");
    }
    return cols;
}

}  // namespace

EssayLoadResult load_essays(std::istream& in, const SetTable& sets, const EssayLoadOptions& options,
                            const std::string& source) {
    EssayLoadResult result;
    std::string line;
    std::size_t number = 0;
    Columns cols{0, 1, 2, 3};
    if (options.has_header) {
        if (!std::getline(in, line)) return result;
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        cols = locate_columns(util::split(line, '\t'), source);
    }
    std::size_t needed = 0;
    for (auto c : cols) needed = std::max(needed, c + 1);

    auto diagnose = [&](const std::string& what) {
        result.diagnostics.push_back(source + ":" + std::to_string(number) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (util::trim(line).empty()) continue;
        const auto fields = util::split(line, '\t');
        if (fields.size() < needed) {
            ++result.malformed_rows;
            diagnose("expected at least " + std::to_string(needed) + " columns, found " + std::to_string(fields.size()));
            continue;
        }
        const auto id = util::parse_int(unquote(fields[cols[0]]));
        const auto set_id = util::parse_int(unquote(fields[cols[1]]));
        const auto score = util::parse_int(unquote(fields[cols[3]]));
        if (!id || !set_id || !score) {
            ++result.malformed_rows;
            diagnose("non-integer essay_id, essay_set or score");
            continue;
        }
        auto set_it = sets.find(static_cast<int>(*set_id));
        if (set_it == sets.end()) {
            ++result.rejected_rows;
            diagnose("essay " + std::to_string(*id) + ": unknown essay set " + std::to_string(*set_id));
            continue;
        }
        const EssaySet& set = set_it->second;
        Essay essay;
        essay.essay_id = *id;
        essay.set_id = set.set_id;
        essay.raw_score = static_cast<int>(*score);
        try {
            essay.normalized_score = normalize_score(essay.raw_score, set);
        } catch (const ScoreRangeError& e) {
            ++result.rejected_rows;
            diagnose("essay " + std::to_string(*id) + ": " + e.what());
            continue;
        }
        std::string text = unquote(fields[cols[2]]);
        if (!options.placeholders.empty()) text = substitute_placeholders(text, options.placeholders);
        essay.sentences = segment(text, options.limits);
        essay.degenerate = essay.token_count() == 0;
        ++result.counts_per_set[set.set_id];
        result.essays.push_back(std::move(essay));
    }
    return result;
}

EssayLoadResult load_essays(const std::filesystem::path& path, const SetTable& sets,
                            const EssayLoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open essay file " + path.string());
    return load_essays(in, sets, options, path.string());
}

SetTable load_set_metadata(const std::filesystem::path& path) {
    const auto kv = util::KeyValueFile::load(path);
    SetTable sets = asap_essay_sets();
    const auto base = path.parent_path();
    for (const auto& [key, value] : kv.values()) {
        const auto parts = util::split(key, '.');
        if (parts.size() != 3 || parts[0] != "set") {
            throw util::ConfigError(path.string() + ": unrecognized key '" + key + "'");
        }
        const auto id = util::parse_int(parts[1]);
        if (!id) throw util::ConfigError(path.string() + ": bad set id in '" + key + "'");
        EssaySet& set = sets[static_cast<int>(*id)];
        set.set_id = static_cast<int>(*id);
        const std::string& field = parts[2];
        if (field == "min") {
            set.score_min = static_cast<int>(kv.get_int(key, 0));
        } else if (field == "max") {
            set.score_max = static_cast<int>(kv.get_int(key, 0));
        } else if (field == "source_dependent") {
            set.is_source_dependent = kv.get_bool(key, false);
        } else if (field == "article") {
            std::filesystem::path article(value);
            if (article.is_relative()) article = base / article;
            std::ifstream in(article);
            if (!in) throw util::ConfigError(path.string() + ": cannot read article " + article.string());
            std::ostringstream text;
            text << in.rdbuf();
            set.source_article = text.str();
        } else {
            throw util::ConfigError(path.string() + ": unrecognized key '" + key + "'");
        }
    }
    for (const auto& [id, set] : sets) set.validate();
    return sets;
}

std::vector<Sentence> article_sentences(const EssaySet& set, const TextLimits& limits) {
    if (!set.source_article) throw std::invalid_argument("essay set " + std::to_string(set.set_id) + " has no article");
    return segment(*set.source_article, limits);
}

}  // namespace gazeaes::corpus
