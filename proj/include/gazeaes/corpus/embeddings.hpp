#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "gazeaes/corpus/vocabulary.hpp"

namespace gazeaes::corpus {

class EmbeddingFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vocabulary-aligned embedding matrix. Row i belongs to vocab token i.
struct EmbeddingTable {
    std::size_t dimension = 0;
    std::size_t rows = 0;
    std::vector<double> values;  // rows x dimension, row-major
    std::size_t matched = 0;     // non-reserved tokens found in the file
    double coverage = 0.0;       // matched / non-reserved vocabulary size

    std::span<const double> row(std::size_t i) const { return {values.data() + i * dimension, dimension}; }
};

/// Reads "token v1 ... vD" lines. Tokens missing from the file get
/// uniform [-0.05, 0.05] rows drawn from `seed`; the PAD row is zero.
/// A line whose value count differs from `dimension` is rejected with its
/// line number.
EmbeddingTable load_embeddings(std::istream& in, const Vocabulary& vocab, std::size_t dimension, std::uint64_t seed,
                               const std::string& source = "<stream>");
EmbeddingTable load_embeddings(const std::filesystem::path& path, const Vocabulary& vocab, std::size_t dimension,
                               std::uint64_t seed);

}  // namespace gazeaes::corpus
