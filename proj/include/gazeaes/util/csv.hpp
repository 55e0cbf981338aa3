#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gazeaes::util {

/// Splits one CSV line. Fields may be double-quoted; "" inside quotes is a
/// literal quote. Throws std::invalid_argument on an unterminated quote.
std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

/// Maps lowercase header names to column positions.
std::map<std::string, std::size_t> csv_header_index(const std::vector<std::string>& header);

}  // namespace gazeaes::util
