#include "gazeaes/util/kv_file.hpp"

#include <fstream>

#include "gazeaes/util/strings.hpp"

namespace gazeaes::util {

KeyValueFile KeyValueFile::parse(std::istream& in, const std::string& source) {
    KeyValueFile kv;
    kv.source_ = source;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(source + ":" + std::to_string(number) + ": expected key = value");
        }
        const std::string key(trim(text.substr(0, eq)));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(number) + ": empty key");
        kv.values_[key] = std::string(trim(text.substr(eq + 1)));
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    return parse(in, path.string());
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

long long KeyValueFile::get_int(const std::string& key, long long fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    auto parsed = parse_int(*v);
    if (!parsed) throw ConfigError(source_ + ": key '" + key + "' expects an integer, got '" + *v + "'");
    return *parsed;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    auto parsed = parse_double(*v);
    if (!parsed) throw ConfigError(source_ + ": key '" + key + "' expects a number, got '" + *v + "'");
    return *parsed;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    const auto lower = to_lower(*v);
    if (lower == "1" || lower == "true" || lower == "yes" || lower == "on") return true;
    if (lower == "0" || lower == "false" || lower == "no" || lower == "off") return false;
    throw ConfigError(source_ + ": key '" + key + "' expects a boolean, got '" + *v + "'");
}

std::string KeyValueFile::require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw ConfigError(source_ + ": missing required key '" + key + "'");
    return *v;
}

}  // namespace gazeaes::util
