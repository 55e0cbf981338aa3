#include "gazeaes/experiments/folds.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <set>

#include "gazeaes/numerics/random.hpp"
#include "gazeaes/util/strings.hpp"

namespace gazeaes::experiments {

const std::vector<long long>& FoldSpec::ids(corpus::Role role) const {
    switch (role) {
        case corpus::Role::train: return train;
        case corpus::Role::dev: return dev;
        case corpus::Role::test: return test;
    }
    throw std::logic_error("unknown role");
}

std::vector<FoldSpec> make_folds(std::span<const long long> essay_ids, int set_id, std::uint64_t seed) {
    const std::size_t n = essay_ids.size();
    if (n < static_cast<std::size_t>(kFoldCount)) {
        throw FoldError("essay set " + std::to_string(set_id) + " has " + std::to_string(n) +
                        " essays; five-fold cross-validation needs at least 5");
    }
    std::vector<long long> ids(essay_ids.begin(), essay_ids.end());
    std::sort(ids.begin(), ids.end());  // input order must not matter
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw FoldError("essay set " + std::to_string(set_id) + " has duplicate essay ids");
    }
    Rng rng(seed);
    rng.shuffle(ids);

    std::vector<std::vector<long long>> chunks(kFoldCount);
    for (int c = 0; c < kFoldCount; ++c) {
        const std::size_t begin = n * static_cast<std::size_t>(c) / kFoldCount;
        const std::size_t end = n * static_cast<std::size_t>(c + 1) / kFoldCount;
        chunks[static_cast<std::size_t>(c)].assign(ids.begin() + static_cast<long>(begin),
                                                   ids.begin() + static_cast<long>(end));
    }
    std::vector<FoldSpec> folds;
    for (int k = 0; k < kFoldCount; ++k) {
        FoldSpec f;
        f.fold_id = k;
        f.set_id = set_id;
        f.test = chunks[static_cast<std::size_t>(k)];
        f.dev = chunks[static_cast<std::size_t>((k + 1) % kFoldCount)];
        for (int c = 0; c < kFoldCount; ++c) {
            if (c == k || c == (k + 1) % kFoldCount) continue;
            const auto& chunk = chunks[static_cast<std::size_t>(c)];
            f.train.insert(f.train.end(), chunk.begin(), chunk.end());
        }
        folds.push_back(std::move(f));
    }
    return folds;
}

FoldTable make_fold_table(const std::vector<corpus::Essay>& essays, std::uint64_t seed) {
    std::map<int, std::vector<long long>> by_set;
    for (const auto& e : essays) by_set[e.set_id].push_back(e.essay_id);
    FoldTable table;
    for (const auto& [set_id, ids] : by_set) {
        table[set_id] = make_folds(ids, set_id, derive_seed(seed, "folds:" + std::to_string(set_id)));
    }
    return table;
}

void validate_folds(const std::vector<FoldSpec>& folds, std::span<const long long> essay_ids) {
    const std::set<long long> expected(essay_ids.begin(), essay_ids.end());
    if (folds.size() != static_cast<std::size_t>(kFoldCount)) {
        throw FoldError("expected 5 folds, found " + std::to_string(folds.size()));
    }
    std::map<long long, int> tested;
    for (const auto& f : folds) {
        std::set<long long> seen;
        for (auto role : {corpus::Role::train, corpus::Role::dev, corpus::Role::test}) {
            for (long long id : f.ids(role)) {
                if (!seen.insert(id).second) {
                    throw FoldError("fold " + std::to_string(f.fold_id) + ": essay " + std::to_string(id) +
                                    " appears in more than one partition");
                }
                if (!expected.count(id)) {
                    throw FoldError("fold " + std::to_string(f.fold_id) + ": unknown essay " + std::to_string(id));
                }
            }
        }
        if (seen.size() != expected.size()) {
            throw FoldError("fold " + std::to_string(f.fold_id) + " covers " + std::to_string(seen.size()) + " of " +
                            std::to_string(expected.size()) + " essays");
        }
        for (long long id : f.test) ++tested[id];
    }
    for (long long id : expected) {
        if (tested[id] != 1) {
            throw FoldError("essay " + std::to_string(id) + " is tested " + std::to_string(tested[id]) + " times");
        }
    }
}

void write_fold_file(std::ostream& out, const std::vector<FoldSpec>& folds) {
    for (const auto& f : folds) {
        for (auto role : {corpus::Role::train, corpus::Role::dev, corpus::Role::test}) {
            for (long long id : f.ids(role)) out << f.fold_id << ',' << corpus::to_string(role) << ',' << id << '\n';
        }
    }
}

std::vector<FoldSpec> read_fold_file(std::istream& in, int set_id, const std::string& source) {
    std::map<int, FoldSpec> folds;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = util::trim(line);
        if (text.empty()) continue;
        const auto parts = util::split(std::string(text), ',');
        auto where = [&] { return source + ":" + std::to_string(line_no); };
        if (parts.size() != 3) throw FoldError(where() + ": expected fold_id,role,essay_id");
        const auto fold = util::parse_int(util::trim(parts[0]));
        const auto id = util::parse_int(util::trim(parts[2]));
        if (!fold || *fold < 0 || *fold >= kFoldCount) throw FoldError(where() + ": fold id must be 0-4");
        if (!id) throw FoldError(where() + ": essay id is not an integer");
        auto& f = folds[static_cast<int>(*fold)];
        f.fold_id = static_cast<int>(*fold);
        f.set_id = set_id;
        const auto role = util::trim(parts[1]);
        if (role == "train") f.train.push_back(*id);
        else if (role == "dev") f.dev.push_back(*id);
        else if (role == "test") f.test.push_back(*id);
        else throw FoldError(where() + ": role must be train, dev or test");
    }
    std::vector<FoldSpec> out;
    for (auto& [k, f] : folds) out.push_back(std::move(f));
    return out;
}

void save_fold_table(const std::filesystem::path& dir, const FoldTable& table) {
    std::filesystem::create_directories(dir);
    for (const auto& [set_id, folds] : table) {
        const auto path = dir / ("fold_set" + std::to_string(set_id) + ".csv");
        std::ofstream out(path);
        if (!out) throw FoldError("cannot write " + path.string());
        write_fold_file(out, folds);
    }
}

FoldTable load_fold_table(const std::filesystem::path& dir) {
    FoldTable table;
    const std::regex name(R"(fold_set(\d+)\.csv)");
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::smatch m;
        const auto file = entry.path().filename().string();
        if (!std::regex_match(file, m, name)) continue;
        std::ifstream in(entry.path());
        if (!in) throw FoldError("cannot read " + entry.path().string());
        const int set_id = std::stoi(m[1].str());
        table[set_id] = read_fold_file(in, set_id, entry.path().string());
    }
    return table;
}

}  // namespace gazeaes::experiments
