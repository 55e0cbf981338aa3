#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gazeaes/corpus/vocabulary.hpp"

namespace gazeaes::experiments {

inline constexpr int kFoldCount = 5;

class FoldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One cross-validation rotation of one essay set.
struct FoldSpec {
    int fold_id = 0;
    int set_id = 0;
    std::vector<long long> train;
    std::vector<long long> dev;
    std::vector<long long> test;

    const std::vector<long long>& ids(corpus::Role role) const;
    bool operator==(const FoldSpec&) const = default;
};

/// Five folds per set id.
using FoldTable = std::map<int, std::vector<FoldSpec>>;

/// Seeded shuffle, then five near-equal chunks; fold k tests on chunk k,
/// validates on chunk k+1 (mod 5) and trains on the other three. Sizes are
/// exactly 60/20/20 when the count is a multiple of five. Throws FoldError
/// for fewer than five essays or duplicate ids.
std::vector<FoldSpec> make_folds(std::span<const long long> essay_ids, int set_id, std::uint64_t seed);

/// make_folds for every set present among `essays`, with per-set seeds
/// derived from `seed`.
FoldTable make_fold_table(const std::vector<corpus::Essay>& essays, std::uint64_t seed);

/// Throws FoldError unless every fold's partitions are pairwise disjoint and
/// together cover exactly `essay_ids`, and every id is tested exactly once
/// across the folds.
void validate_folds(const std::vector<FoldSpec>& folds, std::span<const long long> essay_ids);

/// Lines "fold_id,role,essay_id"; no header.
void write_fold_file(std::ostream& out, const std::vector<FoldSpec>& folds);
std::vector<FoldSpec> read_fold_file(std::istream& in, int set_id, const std::string& source = "<stream>");

/// One file per set, named fold_set<id>.csv.
void save_fold_table(const std::filesystem::path& dir, const FoldTable& table);
/// Loads every fold_set<id>.csv in `dir`.
FoldTable load_fold_table(const std::filesystem::path& dir);

}  // namespace gazeaes::experiments
