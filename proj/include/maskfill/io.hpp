#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace maskfill {

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

std::string read_file(const std::string& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);

/// One sentence per line, tokens separated by whitespace; blank lines skipped.
std::vector<std::vector<std::string>> read_plain_sentences(const std::string& path);
std::vector<std::vector<std::string>> parse_plain_sentences(std::string_view text);

}  // namespace maskfill
