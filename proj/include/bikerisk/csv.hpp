#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bikerisk {

struct CsvRow {
  std::size_t line = 0;  // 1-based physical line where the row starts
  std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields, doubled quotes, CRLF tolerated. Blank
/// lines are skipped. Throws DataError on an unterminated quote.
std::vector<CsvRow> parse_csv(std::string_view text);

std::string csv_escape(std::string_view field);

/// Joins escaped fields with ',' and appends '\n'.
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace bikerisk
