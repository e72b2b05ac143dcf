#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wqa::text {

// ASCII case folding; bytes >= 0x80 pass through untouched.
std::string fold_case(std::string_view s);

// Case-folds, collapses runs of whitespace into one space and trims.
std::string normalize(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view s);

// Splits a newline-delimited list, dropping blank lines and '#' comments.
std::vector<std::string> parse_lines(std::string_view content);

std::string read_file(const std::string& path);

// Creates missing parent directories.
void write_file(const std::string& path, std::string_view content);

}  // namespace wqa::text
