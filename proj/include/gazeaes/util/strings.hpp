#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazeaes::util {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);
bool starts_with(std::string_view s, std::string_view prefix);

std::optional<long long> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

/// Joins items with a separator using operator<<.
template <typename Range>
std::string join(const Range& items, std::string_view sep);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
/// Fixed-point text with the given number of decimals.
std::string format_fixed(double v, int decimals);

}  // namespace gazeaes::util

#include <sstream>

template <typename Range>
std::string gazeaes::util::join(const Range& items, std::string_view sep) {
    std::ostringstream out;
    bool first = true;
    for (const auto& item : items) {
        if (!first) out << sep;
        out << item;
        first = false;
    }
    return out.str();
}
