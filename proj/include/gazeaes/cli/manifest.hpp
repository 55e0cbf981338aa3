#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gazeaes::cli {

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kDataDirVariable = "GAZEAES_DATA_DIR";

std::string tool_version();

/// Lowercase hex SHA-256 of a file's bytes. Throws std::runtime_error when the
/// file cannot be read.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_bytes(const std::string& bytes);

struct InputDigest {
    std::string role;  // config key or flag the file came from
    std::filesystem::path path;
    std::string sha256;  // of the file, or of the sorted file list for a directory
};

/// Digest of a directory: every regular file below it, sorted by relative
/// path, hashed as "<relative path>\0<file digest>\n" lines.
std::string sha256_directory(const std::filesystem::path& dir);

struct RunManifest {
    std::string command;
    std::optional<std::filesystem::path> config_path;
    std::map<std::string, std::string> options;  // fully resolved
    std::uint64_t seed = 0;
    std::vector<InputDigest> inputs;
    std::filesystem::path output_dir;
    std::string tool_version = cli::tool_version();
    std::optional<std::string> data_dir;  // value of GAZEAES_DATA_DIR, if set
    bool dry_run = false;

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

class OutputDirError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Creates `dir` if needed. An existing manifest, or any existing content,
/// is refused unless `force`; with `force` the old manifest is removed so the
/// directory never holds two.
void prepare_output_dir(const std::filesystem::path& dir, bool force);

/// Writes manifest.json into manifest.output_dir.
void write_manifest(const RunManifest& manifest);

}  // namespace gazeaes::cli
