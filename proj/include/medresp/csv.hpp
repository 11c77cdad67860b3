#pragma once

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace medresp {

using CsvRow = std::vector<std::string>;

/// RFC 4180 reader: quoted fields, doubled quotes, embedded newlines, CRLF.
std::vector<CsvRow> read_csv(std::istream& in);
std::vector<CsvRow> read_csv_file(const std::filesystem::path& path);

void write_csv_row(std::ostream& out, std::span<const std::string> fields);
inline void write_csv_row(std::ostream& out, std::initializer_list<std::string> fields) {
  write_csv_row(out, std::span<const std::string>(fields.begin(), fields.size()));
}

/// Shortest representation that parses back to the same double.
std::string format_double(double value);
/// Strict parse of a whole field as a double; throws InputError.
double parse_double(std::string_view text);

}  // namespace medresp
