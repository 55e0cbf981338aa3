#include "gazeaes/corpus/vocabulary.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace gazeaes::corpus {

std::string_view to_string(Role role) {
    switch (role) {
        case Role::train: return "train";
        case Role::dev: return "dev";
        case Role::test: return "test";
    }
    return "?";
}

TaggedEssays TaggedEssays::of(Role role, const std::vector<Essay>& essays) {
    TaggedEssays tagged;
    tagged.role = role;
    for (const auto& e : essays) tagged.essays.push_back(&e);
    return tagged;
}

void TaggedEssays::require_training(std::string_view consumer) const {
    if (role != Role::train) {
        throw LeakageError(std::string(consumer) + " received essays tagged '" + std::string(to_string(role)) +
                           "'; only training essays are allowed");
    }
}

Vocabulary::Vocabulary() {
    append(kPadToken);
    append(kUnkToken);
}

void Vocabulary::append(const std::string& token) {
    index_.emplace(token, tokens_.size());
    tokens_.push_back(token);
}

std::size_t Vocabulary::index_of(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnk : it->second;
}

EncodedText Vocabulary::encode(const std::vector<Sentence>& sentences) const {
    EncodedText out;
    out.reserve(sentences.size());
    for (const auto& s : sentences) {
        TokenIds ids;
        ids.reserve(s.size());
        for (const auto& t : s) ids.push_back(index_of(t));
        out.push_back(std::move(ids));
    }
    return out;
}

void Vocabulary::write(std::ostream& out) const {
    out << "max_size\t" << max_size_ << '\n';
    for (std::size_t i = kReserved; i < tokens_.size(); ++i) out << tokens_[i] << '\n';
}

Vocabulary Vocabulary::read(std::istream& in) {
    Vocabulary v;
    std::string line;
    if (std::getline(in, line) && line.rfind("max_size\t", 0) == 0) {
        v.max_size_ = std::stoul(line.substr(9));
    } else {
        throw std::runtime_error("vocabulary: missing max_size header");
    }
    while (std::getline(in, line)) {
        if (!line.empty()) v.append(line);
    }
    return v;
}

Vocabulary build_vocab(const TaggedEssays& training, std::size_t max_size) {
    training.require_training("build_vocab");
    if (training.essays.empty()) throw std::invalid_argument("build_vocab: empty training set");

    struct Stat {
        std::size_t count = 0;
        std::size_t first_seen = 0;
    };
    std::unordered_map<std::string, Stat> stats;
    std::vector<std::string> order;
    for (const Essay* essay : training.essays) {
        for (const auto& sentence : essay->sentences) {
            for (const auto& token : sentence) {
                auto [it, inserted] = stats.try_emplace(token, Stat{0, order.size()});
                if (inserted) order.push_back(token);
                ++it->second.count;
            }
        }
    }
    std::vector<const std::string*> ranked;
    ranked.reserve(order.size());
    for (const auto& t : order) {
        if (t != Vocabulary::kPadToken && t != Vocabulary::kUnkToken) ranked.push_back(&t);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [&](const std::string* a, const std::string* b) {
        const auto& sa = stats.at(*a);
        const auto& sb = stats.at(*b);
        if (sa.count != sb.count) return sa.count > sb.count;
        return sa.first_seen < sb.first_seen;
    });
    Vocabulary vocab;
    vocab.max_size_ = max_size;
    for (std::size_t i = 0; i < ranked.size() && i < max_size; ++i) vocab.append(*ranked[i]);
    return vocab;
}

}  // namespace gazeaes::corpus
