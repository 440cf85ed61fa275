#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dtc::csv {

using Row = std::vector<std::string>;

/// RFC-4180 reader: quoted fields may contain commas, doubled quotes and line
/// breaks; records end with LF or CRLF. A leading UTF-8 BOM is skipped.
std::vector<Row> parse(std::string_view content);

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const Row& row);

}  // namespace dtc::csv
