#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace supplyrank::csv {

struct Row {
    std::size_t line; // 1-based line where the record starts
    std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
/// line breaks; CRLF and LF both end a record. A leading UTF-8 BOM is
/// dropped and blank lines are skipped. Throws Error{parse} with the line of
/// an unterminated quote.
std::vector<Row> parse(std::string_view text);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Joins escaped fields with commas and terminates with LF.
std::string format_row(std::span<const std::string> fields);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

} // namespace supplyrank::csv
