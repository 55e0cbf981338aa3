#include "gazeaes/corpus/embeddings.hpp"

#include <fstream>
#include <sstream>

#include "gazeaes/numerics/random.hpp"
#include "gazeaes/util/strings.hpp"

namespace gazeaes::corpus {

EmbeddingTable load_embeddings(std::istream& in, const Vocabulary& vocab, std::size_t dimension, std::uint64_t seed,
                               const std::string& source) {
    if (dimension == 0) throw std::invalid_argument("load_embeddings: dimension must be positive");
    EmbeddingTable table;
    table.dimension = dimension;
    table.rows = vocab.size();
    table.values.assign(table.rows * dimension, 0.0);
    std::vector<bool> filled(table.rows, false);

    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (util::trim(line).empty()) continue;
        std::istringstream fields(line);
        std::string token;
        fields >> token;
        std::vector<double> vec;
        vec.reserve(dimension);
        std::string raw;
        while (fields >> raw) {
            auto v = util::parse_double(raw);
            if (!v) throw EmbeddingFormatError(source + ":" + std::to_string(number) + ": non-numeric value '" + raw + "'");
            vec.push_back(*v);
        }
        if (vec.size() != dimension) {
            throw EmbeddingFormatError(source + ":" + std::to_string(number) + ": expected " + std::to_string(dimension) +
                                       " values for '" + token + "', found " + std::to_string(vec.size()));
        }
        if (!vocab.contains(token)) continue;
        const std::size_t row = vocab.index_of(token);
        if (row < Vocabulary::kReserved || filled[row]) continue;
        std::copy(vec.begin(), vec.end(), table.values.begin() + static_cast<std::ptrdiff_t>(row * dimension));
        filled[row] = true;
        ++table.matched;
    }

    for (std::size_t row = Vocabulary::kUnk; row < table.rows; ++row) {
        if (filled[row]) continue;
        Rng rng(derive_seed(seed, "embedding:" + vocab.token(row)));
        for (std::size_t d = 0; d < dimension; ++d) table.values[row * dimension + d] = rng.uniform(-0.05, 0.05);
    }
    const std::size_t real_tokens = table.rows - Vocabulary::kReserved;
    table.coverage = real_tokens == 0 ? 0.0 : static_cast<double>(table.matched) / static_cast<double>(real_tokens);
    return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, const Vocabulary& vocab, std::size_t dimension,
                               std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw EmbeddingFormatError("cannot open embedding file " + path.string());
    return load_embeddings(in, vocab, dimension, seed, path.string());
}

}  // namespace gazeaes::corpus
