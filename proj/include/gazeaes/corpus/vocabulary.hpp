#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gazeaes/corpus/essay.hpp"

namespace gazeaes::corpus {

/// Which partition a group of essays came from.
enum class Role { train, dev, test };

std::string_view to_string(Role role);

/// Raised when a test-partition essay reaches a train-only computation.
class LeakageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A set of essays carrying the partition they were drawn from. Train-only
/// consumers (vocabulary, reader statistics, training batches) check the tag.
struct TaggedEssays {
    Role role = Role::train;
    std::vector<const Essay*> essays;

    static TaggedEssays of(Role role, const std::vector<Essay>& essays);
    /// Throws LeakageError unless role == train.
    void require_training(std::string_view consumer) const;
};

using TokenIds = std::vector<std::size_t>;
using EncodedText = std::vector<TokenIds>;

class Vocabulary {
public:
    static constexpr std::size_t kPad = 0;
    static constexpr std::size_t kUnk = 1;
    static constexpr std::size_t kReserved = 2;
    static constexpr const char* kPadToken = "<pad>";
    static constexpr const char* kUnkToken = "<unk>";

    Vocabulary();

    std::size_t size() const { return tokens_.size(); }
    std::size_t max_size() const { return max_size_; }
    const std::string& token(std::size_t index) const { return tokens_.at(index); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    bool contains(const std::string& token) const { return index_.count(token) != 0; }
    /// Index of a token, or kUnk when absent.
    std::size_t index_of(const std::string& token) const;

    EncodedText encode(const std::vector<Sentence>& sentences) const;

    void write(std::ostream& out) const;
    static Vocabulary read(std::istream& in);

private:
    friend Vocabulary build_vocab(const TaggedEssays&, std::size_t);
    void append(const std::string& token);

    std::size_t max_size_ = 0;
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Top `max_size` tokens by frequency over the training essays; ties go to
/// the token seen first. Throws LeakageError for non-training input and
/// std::invalid_argument for an empty training set.
Vocabulary build_vocab(const TaggedEssays& training, std::size_t max_size = 4000);

}  // namespace gazeaes::corpus
