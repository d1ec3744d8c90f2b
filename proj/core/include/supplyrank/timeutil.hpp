#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace supplyrank {

using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM:SSZ` or `YYYY-MM-DD HH:MM:SS` (UTC).
/// Throws Error{parse} on anything else.
Timestamp parse_utc(std::string_view text);

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_utc(Timestamp t);

/// `YYYY-MM-DD`
std::string format_date(Timestamp t);

/// Current time truncated to whole seconds.
Timestamp now_utc();

/// Current UTC day at 00:00:00.
Timestamp today_utc();

} // namespace supplyrank
