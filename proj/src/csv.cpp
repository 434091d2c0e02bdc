#include "sentiforge/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "sentiforge/common.hpp"

namespace sentiforge::csv {

Table parse(std::string_view text, bool expect_header) {
    std::vector<Row> records;
    Row current;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;  // distinguishes "" line from empty file tail

    std::size_t i = 0;
    const std::size_t n = text.size();
    auto end_field = [&] {
        current.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(current));
        current.clear();
    };

    while (i < n) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else {
            if (c == '"' && field.empty() && !field_started) {
                in_quotes = true;
                field_started = true;
            } else if (c == ',') {
                end_field();
            } else if (c == '\r') {
                // swallow; LF (or EOF) terminates the record
            } else if (c == '\n') {
                end_record();
            } else {
                field.push_back(c);
                field_started = true;
            }
        }
        ++i;
    }
    if (in_quotes) throw DataError("unterminated quoted CSV field");
    if (field_started || !current.empty()) end_record();

    Table table;
    if (expect_header) {
        if (records.empty()) throw DataError("CSV input has no header row");
        table.header = std::move(records.front());
        records.erase(records.begin());
    }
    table.rows = std::move(records);
    return table;
}

Table read_file(const std::string& path, bool expect_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open CSV file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), expect_header);
}

std::string escape_field(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out.put(',');
        out << escape_field(row[i]);
    }
    out.put('\n');
}

void write_file(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open CSV file for writing: " + path);
    if (!table.header.empty()) write_row(out, table.header);
    for (const Row& row : table.rows) write_row(out, row);
    if (!out) throw DataError("failed writing CSV file: " + path);
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

double parse_double(std::string_view field) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw DataError("not a number: '" + std::string(field) + "'");
    }
    return value;
}

long long parse_int(std::string_view field) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw DataError("not an integer: '" + std::string(field) + "'");
    }
    return value;
}

void require_header(const Row& header, const std::vector<std::string>& expected,
                    const std::string& context) {
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i >= header.size()) {
            throw DataError(context + ": missing column '" + expected[i] + "'");
        }
        if (header[i] != expected[i]) {
            throw DataError(context + ": expected column '" + expected[i] +
                            "' at position " + std::to_string(i + 1) + ", found '" +
                            header[i] + "'");
        }
    }
    if (header.size() > expected.size()) {
        throw DataError(context + ": unexpected extra column '" +
                        header[expected.size()] + "'");
    }
}

}  // namespace sentiforge::csv
