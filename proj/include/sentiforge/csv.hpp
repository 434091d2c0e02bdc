// Minimal RFC-4180 CSV reader/writer.
//
// Fields containing comma, quote, CR or LF are quoted and embedded quotes are
// doubled. The reader accepts quoted fields spanning newlines. Numeric output
// goes through the shortest round-trip representation so repeated
// parse/format cycles are byte-stable.

#ifndef SENTIFORGE_CSV_HPP
#define SENTIFORGE_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sentiforge::csv {

using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;
};

// Parses full CSV text. If `expect_header` the first record becomes `header`.
Table parse(std::string_view text, bool expect_header = true);

Table read_file(const std::string& path, bool expect_header = true);

std::string escape_field(std::string_view field);

void write_row(std::ostream& out, const Row& row);

void write_file(const std::string& path, const Table& table);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

double parse_double(std::string_view field);  // throws DataError
long long parse_int(std::string_view field);  // throws DataError

// Verifies `header` equals `expected` column-for-column; on mismatch throws
// DataError naming the first offending column.
void require_header(const Row& header, const std::vector<std::string>& expected,
                    const std::string& context);

}  // namespace sentiforge::csv

#endif  // SENTIFORGE_CSV_HPP
