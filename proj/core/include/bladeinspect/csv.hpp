#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bladeinspect::csv {

/// Shortest-safe decimal form: 17 significant digits, so parsing recovers the exact double.
std::string format_real(double value);

/// Quotes a field when it contains a comma, quote or line break.
std::string escape(std::string_view field);

/// Splits one record; supports RFC 4180 double-quoted fields (no embedded newlines).
std::vector<std::string> split_line(std::string_view line);

/// Joins fields with commas, escaping each.
std::string join(const std::vector<std::string>& fields);

/// Reads the next nonblank line (CR stripped). Returns false at end of stream.
bool next_record(std::istream& in, std::string& line, std::size_t& line_no);

/// Parses a full-string finite double; returns false on trailing garbage, nonnumeric or nonfinite text.
bool parse_real(std::string_view text, double& out);

}  // namespace bladeinspect::csv
