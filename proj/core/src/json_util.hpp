#pragma once

#include "supplyrank/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <string>
#include <string_view>

namespace supplyrank::detail {

struct TextPosition {
    std::size_t line = 1;
    std::size_t column = 1;
};

inline TextPosition position_of(std::string_view text, std::size_t byte_offset)
{
    TextPosition pos;
    const std::size_t end = std::min(byte_offset, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++pos.line;
            pos.column = 1;
        } else {
            ++pos.column;
        }
    }
    return pos;
}

/// Parses JSON, turning library errors into Error{parse} with line and column.
inline nlohmann::json parse_json(std::string_view text, std::string_view what)
{
    try {
        return nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        // `byte` is one past the offending character
        const auto pos = position_of(text, e.byte == 0 ? 0 : e.byte - 1);
        throw Error(ErrorKind::parse, fmt::format("{}: malformed JSON at line {}, column {} (offset {})", what,
                                                  pos.line, pos.column, e.byte));
    }
}

inline const nlohmann::json* member(const nlohmann::json& object, const char* key)
{
    auto it = object.find(key);
    return it == object.end() ? nullptr : &*it;
}

} // namespace supplyrank::detail
