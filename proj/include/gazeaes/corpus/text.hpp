#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gazeaes/corpus/essay.hpp"

namespace gazeaes::corpus {

struct TextLimits {
    std::size_t max_sentence_tokens = 50;
    std::size_t max_sentences = 60;
};

/// Lowercases, splits on whitespace and detaches ASCII punctuation into
/// single-character tokens. '@' stays attached so placeholders such as
/// "@NAME1" survive as one token.
std::vector<std::string> tokenize(std::string_view text);

/// Splits after '.', '!' or '?' when followed by whitespace. Blank pieces
/// are dropped; text with no terminal punctuation is one sentence.
std::vector<std::string> split_sentences(std::string_view text);

/// split_sentences + tokenize + truncation to the limits. Always returns at
/// least one sentence (possibly empty).
std::vector<Sentence> segment(std::string_view text, const TextLimits& limits = {});

using PlaceholderMap = std::map<std::string, std::string>;

/// Replaces each placeholder key (e.g. "@NAME1") with its value. Longer keys
/// are substituted first so "@NAME10" is not clobbered by "@NAME1".
std::string substitute_placeholders(std::string_view text, const PlaceholderMap& map);

/// Reads `@KEY = replacement` lines.
PlaceholderMap load_placeholder_map(const std::filesystem::path& path);

}  // namespace gazeaes::corpus
