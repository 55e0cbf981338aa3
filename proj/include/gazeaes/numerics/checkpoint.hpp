#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gazeaes/numerics/parameters.hpp"

namespace gazeaes::numerics {

/// Checkpoint container, text format version 1:
///
///   gazeaes-checkpoint 1
///   precision <32|64>
///   meta <key> <value...>          (zero or more)
///   parameters <count>
///   param <name> <rank> <dims...>
///   <values as C99 hex floats, space separated, one line>
///   ...                            (repeated per parameter)
///   end
///
/// Hex floats make the round trip exact at either precision.
struct Checkpoint {
    static constexpr int kVersion = 1;

    struct Entry {
        Shape shape;
        std::vector<double> values;
    };

    int version = kVersion;
    int precision_bits = 64;
    std::map<std::string, std::string> metadata;
    std::vector<std::string> order;
    std::map<std::string, Entry> entries;
};

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <typename T>
Checkpoint make_checkpoint(const ParameterSet<T>& params, std::map<std::string, std::string> metadata = {});

/// Copies checkpoint values into params. Names and shapes must match exactly.
template <typename T>
void apply_checkpoint(const Checkpoint& checkpoint, ParameterSet<T>& params);

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gazeaes::numerics
