#include "supplyrank/csv.hpp"

#include "supplyrank/error.hpp"

#include <fmt/format.h>

#include <array>
#include <charconv>

namespace supplyrank::csv {

std::vector<Row> parse(std::string_view text)
{
    if (text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }
    std::vector<Row> rows;
    Row current{1, {}};
    std::string field;
    std::size_t line = 1;
    std::size_t quote_line = 0;
    bool in_quotes = false;
    bool field_started = false;

    auto end_record = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        const bool blank = current.fields.size() == 1 && current.fields[0].empty() && !field_started;
        if (!blank) {
            rows.push_back(std::move(current));
        }
        current = Row{line + 1, {}};
        field_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            field_started = true;
            quote_line = line;
            break;
        case ',':
            current.fields.push_back(std::move(field));
            field.clear();
            field_started = true;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') {
                break;
            }
            end_record();
            ++line;
            break;
        case '\n':
            end_record();
            ++line;
            break;
        default:
            field += c;
            field_started = true;
            break;
        }
    }
    if (in_quotes) {
        throw Error(ErrorKind::parse, fmt::format("CSV: unterminated quoted field starting on line {}", quote_line));
    }
    if (field_started || !current.fields.empty()) {
        end_record();
    }
    return rows;
}

std::string escape(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out;
    out.reserve(field.size() + 2);
    out += '"';
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string format_row(std::span<const std::string> fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += escape(fields[i]);
    }
    out += '\n';
    return out;
}

std::string format_number(double value)
{
    std::array<char, 64> buffer{};
    auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc{}) {
        throw Error(ErrorKind::validation, "number formatting failed");
    }
    return std::string(buffer.data(), ptr);
}

} // namespace supplyrank::csv
