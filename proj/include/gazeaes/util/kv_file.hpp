#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace gazeaes::util {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` text file. Blank lines and lines starting with '#'
/// are ignored; later keys override earlier ones.
class KeyValueFile {
public:
    static KeyValueFile parse(std::istream& in, const std::string& source = "<stream>");
    static KeyValueFile load(const std::filesystem::path& path);

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& values() const { return values_; }
    const std::string& source() const { return source_; }

    std::optional<std::string> get(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string require(const std::string& key) const;

private:
    std::string source_;
    std::map<std::string, std::string> values_;
};

}  // namespace gazeaes::util
