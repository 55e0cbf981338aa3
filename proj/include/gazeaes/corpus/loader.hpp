#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gazeaes/corpus/essay.hpp"
#include "gazeaes/corpus/text.hpp"

namespace gazeaes::corpus {

struct EssayLoadOptions {
    /// When true the first row names the columns; essay_id, essay_set, essay
    /// and domain1_score are located by name (extra columns are ignored).
    /// When false the first four columns are taken in that order.
    bool has_header = true;
    TextLimits limits;
    PlaceholderMap placeholders;
};

struct EssayLoadResult {
    std::vector<Essay> essays;
    std::map<int, std::size_t> counts_per_set;
    std::size_t malformed_rows = 0;
    std::size_t rejected_rows = 0;
    std::vector<std::string> diagnostics;
};

/// Parses the ASAP-style tab-separated essay file. Rows with scores outside
/// their set's range or unknown set ids are rejected; rows that cannot be
/// parsed are skipped. Both are counted and described in diagnostics.
EssayLoadResult load_essays(std::istream& in, const SetTable& sets, const EssayLoadOptions& options = {},
                            const std::string& source = "<stream>");
EssayLoadResult load_essays(const std::filesystem::path& path, const SetTable& sets,
                            const EssayLoadOptions& options = {});

/// Flat key-value metadata:
///   set.<id>.min = 0
///   set.<id>.max = 3
///   set.<id>.article = relative/or/absolute/path.txt
///   set.<id>.source_dependent = true
/// Sets not mentioned fall back to the built-in ASAP table. Article paths are
/// resolved against the metadata file's directory and read eagerly.
SetTable load_set_metadata(const std::filesystem::path& path);

/// Tokenized source article as sentences (same segmentation as essays).
std::vector<Sentence> article_sentences(const EssaySet& set, const TextLimits& limits = {});

}  // namespace gazeaes::corpus
