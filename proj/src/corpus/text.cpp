#include "gazeaes/corpus/text.hpp"

#include <algorithm>
#include <cctype>

#include "gazeaes/util/kv_file.hpp"
#include "gazeaes/util/strings.hpp"

namespace gazeaes::corpus {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_detached_punct(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u) && c != '@';
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    };
    for (char c : text) {
        if (is_space(c)) {
            flush();
        } else if (is_detached_punct(c)) {
            flush();
            tokens.emplace_back(1, c);
        } else {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    flush();
    return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    auto emit = [&](std::size_t end) {
        const auto piece = util::trim(text.substr(start, end - start));
        if (!piece.empty()) out.emplace_back(piece);
        start = end;
    };
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        const char c = text[i];
        if ((c == '.' || c == '!' || c == '?') && is_space(text[i + 1])) emit(i + 1);
    }
    if (start < text.size()) emit(text.size());
    return out;
}

std::vector<Sentence> segment(std::string_view text, const TextLimits& limits) {
    std::vector<Sentence> sentences;
    for (const auto& piece : split_sentences(text)) {
        if (sentences.size() >= limits.max_sentences) break;
        auto tokens = tokenize(piece);
        if (tokens.empty()) continue;
        if (tokens.size() > limits.max_sentence_tokens) tokens.resize(limits.max_sentence_tokens);
        sentences.push_back(std::move(tokens));
    }
    if (sentences.empty()) sentences.emplace_back();
    return sentences;
}

std::string substitute_placeholders(std::string_view text, const PlaceholderMap& map) {
    if (map.empty()) return std::string(text);
    std::vector<const std::pair<const std::string, std::string>*> keys;
    for (const auto& entry : map) keys.push_back(&entry);
    std::stable_sort(keys.begin(), keys.end(), [](auto* a, auto* b) { return a->first.size() > b->first.size(); });

    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        bool replaced = false;
        if (text[i] == '@') {
            for (auto* kv : keys) {
                if (text.substr(i, kv->first.size()) == kv->first) {
                    out += kv->second;
                    i += kv->first.size();
                    replaced = true;
                    break;
                }
            }
        }
        if (!replaced) out.push_back(text[i++]);
    }
    return out;
}

PlaceholderMap load_placeholder_map(const std::filesystem::path& path) {
    const auto kv = util::KeyValueFile::load(path);
    return PlaceholderMap(kv.values().begin(), kv.values().end());
}

}  // namespace gazeaes::corpus
