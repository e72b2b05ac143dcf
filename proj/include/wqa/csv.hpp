#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace wqa::csv {

struct Row {
  std::size_t line = 0;  // 1-based physical line where the record starts
  std::vector<std::string> fields;
};

// RFC 4180 reader: quoted fields may contain separators, doubled quotes and
// newlines. Empty physical lines are skipped.
std::vector<Row> parse(std::string_view content);

std::string quote(std::string_view field);

// Writes one record terminated by '\n', quoting only where needed.
std::string format_row(const std::vector<std::string>& fields);

// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

// Strict decimal parse; throws Parse on trailing garbage or empty input.
double parse_double(std::string_view s, std::size_t line);

// Index of `name` in a header row, or npos.
std::size_t column(const Row& header, std::string_view name);

}  // namespace wqa::csv
