#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace relgraph::text {

std::vector<std::string> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Non-empty, non-comment lines of a document, trailing '\r' removed.
std::vector<std::string> data_lines(std::string_view document);

/// Lowercase, apostrophes dropped, other punctuation turned into spaces,
/// whitespace collapsed. "Xiaoming's father-in-law!" -> "xiaomings father in law".
std::string normalize(std::string_view s);

/// Whitespace tokens of an already normalized string.
std::vector<std::string> tokens(std::string_view normalized);

/// Backslash escaping so a value fits on one line of a '|' separated record.
std::string escape_field(std::string_view s);
std::string unescape_field(std::string_view s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// "first".."tenth"; empty for anything else.
std::string ordinal_word(int n);
/// Inverse of ordinal_word; 0 when the word is not an ordinal.
int ordinal_value(std::string_view word);

/// Hex SHA-256 of the input.
std::string sha256_hex(std::string_view data);

} // namespace relgraph::text
