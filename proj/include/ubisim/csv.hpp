#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ubisim::csv {

using Row = std::vector<std::string>;

// Splits one record. Double-quoted fields may contain the delimiter and
// doubled quotes; embedded newlines are not supported.
Row split(const std::string& line, char delimiter = ',');

// Quotes a field only when it contains the delimiter, a quote or a newline.
std::string quote(const std::string& field, char delimiter = ',');

void write_row(std::ostream& out, const Row& row, char delimiter = ',');

// Reads all records; strips a trailing '\r' and a leading UTF-8 BOM.
std::vector<Row> read_all(std::istream& in, char delimiter = ',');

}  // namespace ubisim::csv
