#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace collabnet {

/// Shortest round-trip decimal for `x`; integral values keep a trailing ".0".
std::string format_real(double x);

/// Fixed-point with `decimals` digits after the point.
std::string format_fixed(double x, int decimals);

/// Splits one CSV line on commas. Double-quoted fields may contain commas
/// and doubled quotes.
std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

std::string trim(std::string_view s);

/// Lowercase, trim and collapse internal whitespace runs to one space.
std::string normalize_label(std::string_view s);

/// Reads a whole file; throws ValidationError when it cannot be opened.
std::string read_file(const std::string& path);

/// Writes `data` to `path` in binary mode; throws ValidationError on failure.
void write_file(const std::string& path, std::string_view data);

/// Splits on '\n', dropping a trailing '\r' on each line and a final empty line.
std::vector<std::string> split_lines(std::string_view text);

}  // namespace collabnet
